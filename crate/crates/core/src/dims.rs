//! Graded dimensions: partition numbers, the product formulas for the
//! Hilbert series, and counts of irreducible words by degree.

use crate::report::{CaseResult, CheckReport};
use crate::words::{Generator, Word};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::fmt;

/// Power series in `x` with integer coefficients, known through `x^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        coeffs[0] = BigInt::one();
        IntSeries { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        IntSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> &BigInt {
        &self.coeffs[d]
    }

    /// Multiplies by `1/(1 - x^step)` in place.
    fn div_one_minus(&mut self, step: usize) {
        for d in step..self.coeffs.len() {
            let prev = self.coeffs[d - step].clone();
            self.coeffs[d] += prev;
        }
    }

    /// Product, truncated to the smaller order.
    pub fn mul(&self, other: &IntSeries) -> IntSeries {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|d| (0..=d).map(|i| &self.coeffs[i] * &other.coeffs[d - i]).sum()).collect();
        IntSeries { coeffs }
    }

    /// `f(x^k)`, truncated to `order`.
    pub fn substitute_power(&self, k: usize, order: usize) -> IntSeries {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * k > order {
                break;
            }
            coeffs[i * k] = c.clone();
        }
        IntSeries { coeffs }
    }
}

impl fmt::Display for IntSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        f.write_str(&cs.join(" "))
    }
}

/// Number of partitions of `n`, by Euler's pentagonal recurrence.
pub fn partitions_count(n: usize) -> BigInt {
    let mut p = vec![BigInt::one()];
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for k in 1i64.. {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let g2 = (k * (3 * k + 1) / 2) as usize;
            let mut term = p[m - g1].clone();
            if g2 <= m {
                term += &p[m - g2];
            }
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc);
    }
    p.swap_remove(n)
}

/// `P(x) = prod_i 1/(1 - x^i)`.
pub fn partition_series(order: usize) -> IntSeries {
    let mut s = IntSeries::one(order);
    for i in 1..=order {
        s.div_one_minus(i);
    }
    s
}

/// `prod_n 1/(1 - x^n)^2`.
pub fn hilbert_aq(order: usize) -> IntSeries {
    let mut s = IntSeries::one(order);
    for n in 1..=order {
        s.div_one_minus(n);
        s.div_one_minus(n);
    }
    s
}

/// `prod_i 1/((1 - x^(2i-1))^2 (1 - x^(2i)))`.
pub fn hilbert_oq(order: usize) -> IntSeries {
    let mut s = IntSeries::one(order);
    for n in 1..=order {
        s.div_one_minus(n);
        if n % 2 == 1 {
            s.div_one_minus(n);
        }
    }
    s
}

/// Every irreducible word of degree exactly `d`, in shortlex order.
pub fn enumerate_irreducible(d: u64) -> Vec<Word> {
    let mut letters: Vec<Generator> =
        Generator::all_up_to(d as u32 / 2).into_iter().filter(|g| g.degree() <= d).collect();
    letters.sort();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    extend(&letters, 0, d, &mut cur, &mut out);
    out.sort();
    out
}

/// Appends to `cur` letters from `letters[start..]` in non-decreasing order
/// until the remaining degree is used up.
fn extend(letters: &[Generator], start: usize, left: u64, cur: &mut Vec<Generator>, out: &mut Vec<Word>) {
    if left == 0 {
        out.push(Word(cur.clone()));
        return;
    }
    for (i, g) in letters.iter().enumerate().skip(start) {
        if g.degree() <= left {
            cur.push(*g);
            extend(letters, i, left - g.degree(), cur, out);
            cur.pop();
        }
    }
}

/// Irreducible word counts for `d = 0..=max_d` against the product formula.
pub fn check_word_counts(max_d: u64) -> CheckReport {
    let h = hilbert_aq(max_d as usize);
    let results = (0..=max_d)
        .into_par_iter()
        .map(|d| {
            let n = enumerate_irreducible(d).len();
            let want = h.coeff(d as usize);
            CaseResult::new(format!("dim(A_{d})"), BigInt::from(n) == *want, format!("{n} words, product {want}"))
        })
        .collect();
    CheckReport { suite: format!("dims(d<={max_d})"), results }
}

/// `prod 1/(1-x^n)^2 = H(x) P(x^2)` coefficientwise through `x^order`.
pub fn check_dim_identity(order: usize) -> CheckReport {
    let lhs = hilbert_aq(order);
    let rhs = hilbert_oq(order).mul(&partition_series(order).substitute_power(2, order));
    let mut rep = CheckReport::new(format!("dim-identity(order={order})"));
    for d in 0..=order {
        let (a, b) = (lhs.coeff(d), rhs.coeff(d));
        rep.push(CaseResult::new(format!("x^{d}"), a == b, format!("{a} vs {b}")));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().copied().map(BigInt::from).collect()
    }

    #[test]
    fn partitions() {
        assert_eq!(partitions_count(0), BigInt::one());
        assert_eq!(partitions_count(4), BigInt::from(5));
        assert_eq!(partitions_count(100), "190569292".parse::<BigInt>().unwrap());
        let p = partition_series(12);
        for n in 0..=12 {
            assert_eq!(p.coeff(n), &partitions_count(n), "n={n}");
        }
    }

    #[test]
    fn hilbert_low_terms() {
        assert_eq!(hilbert_aq(8).coeffs(), ints(&[1, 2, 5, 10, 20, 36, 65, 110, 185]));
        assert_eq!(hilbert_oq(2).coeffs(), ints(&[1, 2, 4]));
    }

    #[test]
    fn small_degrees() {
        assert_eq!(enumerate_irreducible(0), vec![Word::empty()]);
        let d1 = enumerate_irreducible(1);
        assert_eq!(d1, vec![Word::letter(Generator::w(0)), Word::letter(Generator::w(1))]);
        assert_eq!(enumerate_irreducible(3).len(), 10);
        for w in enumerate_irreducible(6) {
            assert!(w.is_irreducible());
            assert_eq!(w.degree(), 6);
        }
    }

    #[test]
    fn counts_match_product() {
        let rep = check_word_counts(10);
        assert!(rep.passed(), "{}", rep.summary());
    }

    #[test]
    fn identity_holds() {
        assert!(check_dim_identity(0).passed());
        let rep = check_dim_identity(12);
        assert!(rep.passed(), "{}", rep.summary());
    }

    // Heuristic: observed from the product, not a stated property.
    #[test]
    fn heuristic_dims_nondecreasing() {
        let h = hilbert_aq(10);
        assert!(h.coeffs().windows(2).all(|w| w[0] <= w[1]));
    }

    proptest! {
        #[test]
        fn product_coefficients_nonnegative(order in 0usize..40) {
            for s in [hilbert_aq(order), hilbert_oq(order), partition_series(order)] {
                prop_assert!(s.coeffs().iter().all(|c| *c >= BigInt::zero()));
            }
        }

        #[test]
        fn mul_by_one_is_identity(order in 0usize..30) {
            let h = hilbert_aq(order);
            prop_assert_eq!(h.mul(&IntSeries::one(order)), h);
        }
    }
}
