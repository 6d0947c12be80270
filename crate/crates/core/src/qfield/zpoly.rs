//! Dense univariate polynomials over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// A polynomial in `q` with integer coefficients, stored low degree first.
/// Trailing zero coefficients are never stored, so the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * q^deg`.
    pub fn monomial(c: BigInt, deg: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c;
        ZPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Largest `v` with `q^v` dividing `self` (0 for the zero polynomial).
    pub fn q_valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// `Some((c, k))` when `self = c q^k`.
    pub fn as_monomial(&self) -> Option<(&BigInt, usize)> {
        let v = self.q_valuation();
        (self.coeffs.len() == v + 1).then(|| (&self.coeffs[v], v))
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn neg(&self) -> Self {
        ZPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ZPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Divides every coefficient by `c`; `c` must divide all of them.
    pub fn div_int_exact(&self, c: &BigInt) -> Self {
        if c.is_one() {
            return self.clone();
        }
        ZPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|x| {
                    let (d, r) = x.div_rem(c);
                    debug_assert!(r.is_zero(), "inexact integer division");
                    d
                })
                .collect(),
        }
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        ZPoly { coeffs }
    }

    /// Divides by `q^k`; `q^k` must divide `self`.
    pub fn unshift(&self, k: usize) -> Self {
        debug_assert!(self.is_zero() || self.q_valuation() >= k);
        ZPoly { coeffs: self.coeffs.iter().skip(k).cloned().collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() { (self, other) } else { (other, self) };
        let mut coeffs = long.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, BigInt::zero());
        for (a, b) in coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.is_constant() {
            return self.scale(&other.coeffs[0]);
        }
        if self.is_constant() {
            return other.scale(&self.coeffs[0]);
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(coeffs)
    }

    /// Pseudo-remainder of `self` by nonzero `d`: `lc(d)^e * self = Q d + R`.
    fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo_rem by zero");
        let lc = d.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = r[top].clone();
            if c.is_zero() {
                r.pop();
                continue;
            }
            for x in r.iter_mut() {
                *x *= &lc;
            }
            let off = top - dd;
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[off + i] -= &c * dc;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        Self::from_coeffs(r)
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        self.div_int_exact(&c)
    }

    /// Greatest common divisor in `Z[q]`, with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalize_sign();
        }
        if other.is_zero() {
            return self.normalize_sign();
        }
        let cg = self.content().gcd(&other.content());
        let v = self.q_valuation().min(other.q_valuation());
        if self.is_constant() || other.is_constant() {
            return Self::constant(cg);
        }
        if self.as_monomial().is_some() || other.as_monomial().is_some() {
            return Self::monomial(cg, v);
        }
        let mut a = self.unshift(self.q_valuation()).primitive_part();
        let mut b = other.unshift(other.q_valuation()).primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.is_constant() {
                a = Self::one();
                break;
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&cg).shift(v)
    }

    fn normalize_sign(&self) -> Self {
        if self.leading().is_some_and(|c| c.is_negative()) {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact quotient `self / d` in `Z[q]`; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.is_constant() {
            let c = &d.coeffs[0];
            return self.coeffs.iter().all(|x| x.is_multiple_of(c)).then(|| self.div_int_exact(c));
        }
        if let Some((c, k)) = d.as_monomial() {
            if self.q_valuation() < k || !self.coeffs.iter().all(|x| x.is_multiple_of(c)) {
                return None;
            }
            return Some(self.unshift(k).div_int_exact(c));
        }
        let sd = self.degree().unwrap();
        if sd < dd {
            return None;
        }
        let lc = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for top in (dd..=sd).rev() {
            if r[top].is_zero() {
                continue;
            }
            let (c, rem) = r[top].div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            let off = top - dd;
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[off + i] -= &c * dc;
            }
            quot[off] = c;
        }
        r.iter().all(|x| x.is_zero()).then(|| Self::from_coeffs(quot))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Renders as a sum in descending powers of `q`, treating exponents as
    /// offset by `-shift` (so Laurent polynomials print with negative powers).
    pub(crate) fn render_laurent(&self, shift: i64) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let e = i as i64 - shift;
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }

    /// Total order used only to make containers deterministic.
    pub(crate) fn structural_cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_laurent(0))
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> ZPoly {
        ZPoly::from_i64s(cs)
    }

    #[test]
    fn gcd_of_products() {
        // (q+1)(q-2) and (q+1)(2q+3)
        let a = p(&[1, 1]).mul(&p(&[-2, 1]));
        let b = p(&[1, 1]).mul(&p(&[3, 2]));
        assert_eq!(a.gcd(&b), p(&[1, 1]));
    }

    #[test]
    fn gcd_keeps_content_and_q_power() {
        let a = p(&[0, 0, 6, 6]); // 6q^2(q+1)
        let b = p(&[0, 4, 4]); // 4q(q+1)
        assert_eq!(a.gcd(&b), p(&[0, 2, 2]));
    }

    #[test]
    fn gcd_coprime() {
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[-1, 1])), ZPoly::one());
    }

    #[test]
    fn exact_division() {
        let a = p(&[-1, 0, 0, 0, 1]);
        assert_eq!(a.div_exact(&p(&[-1, 0, 1])), Some(p(&[1, 0, 1])));
        assert_eq!(a.div_exact(&p(&[2, 1])), None);
        assert_eq!(p(&[0, 0, 3]).div_exact(&p(&[0, 3])), Some(p(&[0, 1])));
    }

    #[test]
    fn rendering() {
        assert_eq!(p(&[1, 0, -2, 1]).to_string(), "q^3 - 2*q^2 + 1");
        assert_eq!(p(&[1, 0, 1]).render_laurent(1), "q + q^-1");
        assert_eq!(p(&[-3]).to_string(), "-3");
    }
}
