//! Independent reference implementations used by the self-test suites.
//!
//! These deliberately avoid the code paths they check: multiplication works
//! on explicit generator words with bubble-sorted transposition counting
//! instead of bitmask sign arithmetic.

use std::cmp::Ordering;

use crate::grassmann::Supernumber;
use crate::scalar::Scalar;

/// Word-concatenation product oracle: concatenate the generator words of
/// every term pair, bubble-sort while counting transpositions, and drop any
/// word with a repeated generator.
pub fn oracle_mul<S: Scalar>(a: &Supernumber<S>, b: &Supernumber<S>) -> Supernumber<S> {
    assert_eq!(a.gens(), b.gens());
    let mut acc = Supernumber::zero(a.gens());
    for (ia, ca) in a.terms() {
        for (ib, cb) in b.terms() {
            let mut word: Vec<u8> = ia.iter().chain(ib.iter()).copied().collect();
            let mut sign = 1i8;
            let mut zero = false;
            for i in 0..word.len() {
                for j in 0..word.len().saturating_sub(1 + i) {
                    match word[j].cmp(&word[j + 1]) {
                        Ordering::Greater => {
                            word.swap(j, j + 1);
                            sign = -sign;
                        }
                        Ordering::Equal => zero = true,
                        Ordering::Less => {}
                    }
                }
            }
            if zero || word.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let mut c = ca.mul(cb);
            if sign < 0 {
                c = c.neg();
            }
            let term = Supernumber::monomial(a.gens(), &word, c).expect("sorted word");
            acc = acc.checked_add(&term).expect("same context");
        }
    }
    acc
}
