//! The coefficient field Q(q) of rational functions in `q`, and the named
//! scalars of the algebra.

mod zpoly;

pub use zpoly::ZPoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
}

/// An element `num/den` of Q(q).
///
/// Canonical form: `gcd(num, den) = 1` in `Z[q]` and `den` has a positive
/// leading coefficient. Zero is `0/1`. Because `Z[q]` is a UFD this form is
/// unique, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QRat {
    num: ZPoly,
    den: ZPoly,
}

impl QRat {
    pub fn zero() -> Self {
        QRat { num: ZPoly::zero(), den: ZPoly::one() }
    }

    pub fn one() -> Self {
        QRat { num: ZPoly::one(), den: ZPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        QRat { num: ZPoly::constant(n), den: ZPoly::one() }
    }

    /// `n/d` for integers.
    pub fn ratio(n: i64, d: i64) -> Self {
        Self::new(ZPoly::from_i64s(&[n]), ZPoly::from_i64s(&[d])).expect("zero denominator")
    }

    /// Builds `num/den` and brings it to canonical form.
    pub fn new(num: ZPoly, den: ZPoly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::reduce(num, den, None))
    }

    /// Canonicalizes, optionally using a known multiple-of-gcd hint.
    fn reduce(num: ZPoly, den: ZPoly, g_hint: Option<&ZPoly>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = match g_hint {
            Some(h) => num.gcd(h),
            None => num.gcd(&den),
        };
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        if den.leading().unwrap().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        QRat { num, den }
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        QRat { num: ZPoly::from_i64s(&[0, 1]), den: ZPoly::one() }
    }

    /// `q^e` for any integer `e`.
    pub fn q_pow(e: i64) -> Self {
        let m = ZPoly::monomial(BigInt::one(), e.unsigned_abs() as usize);
        if e >= 0 {
            QRat { num: m, den: ZPoly::one() }
        } else {
            QRat { num: ZPoly::one(), den: m }
        }
    }

    pub fn numer(&self) -> &ZPoly {
        &self.num
    }

    pub fn denom(&self) -> &ZPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The integer value if this is a constant integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn try_inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.leading().unwrap().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Ok(QRat { num, den })
    }

    pub fn inv(&self) -> Self {
        self.try_inv().expect("inverse of zero")
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(self * &other.try_inv()?)
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Value at a rational point; `None` where the denominator vanishes.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    /// True if the value is a single signed term `c q^e` with integer `c`.
    pub fn is_monomial(&self) -> bool {
        self.num.as_monomial().is_some() && self.den.as_monomial().is_some_and(|(c, _)| c.is_one())
    }

    /// Text form: a Laurent polynomial when the denominator is a power of `q`,
    /// else `(num)/(den)`.
    pub fn render(&self) -> String {
        if let Some((c, k)) = self.den.as_monomial() {
            if c.is_one() {
                return self.num.render_laurent(k as i64);
            }
        }
        format!("({})/({})", self.num, self.den)
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let rhs_num = if negate { other.num.neg() } else { other.num.clone() };
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return QRat { num: rhs_num, den: other.den.clone() };
        }
        if self.den == other.den {
            let num = self.num.add(&rhs_num);
            return Self::reduce(num, self.den.clone(), None);
        }
        // With g = gcd(b, d): a/b + c/d = (a d' + c b') / (b d'), and any common
        // factor of that fraction already divides g.
        let g = self.den.gcd(&other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&rhs_num.mul(&self.den));
            let den = self.den.mul(&other.den);
            return Self::reduce(num, den, Some(&ZPoly::one()));
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = other.den.div_exact(&g).unwrap();
        let num = self.num.mul(&d1).add(&rhs_num.mul(&b1));
        let den = self.den.mul(&d1);
        Self::reduce(num, den, Some(&g))
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return QRat { num: self.num.mul(&other.num), den: ZPoly::one() };
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let a = self.num.div_exact(&g1).unwrap();
        let d = other.den.div_exact(&g1).unwrap();
        let c = other.num.div_exact(&g2).unwrap();
        let b = self.den.div_exact(&g2).unwrap();
        let (mut num, mut den) = (a.mul(&c), b.mul(&d));
        if den.leading().unwrap().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        QRat { num, den }
    }

    /// Deterministic total order for containers; not an ordering of values.
    pub fn structural_cmp(&self, other: &Self) -> Ordering {
        self.den.structural_cmp(&other.den).then_with(|| self.num.structural_cmp(&other.num))
    }
}

impl Default for QRat {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRat({})", self.render())
    }
}

impl From<i64> for QRat {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&QRat> for &QRat {
            type Output = QRat;
            fn $m(self, rhs: &QRat) -> QRat {
                $body(self, rhs)
            }
        }
        impl $tr<QRat> for QRat {
            type Output = QRat;
            fn $m(self, rhs: QRat) -> QRat {
                $body(&self, &rhs)
            }
        }
        impl $tr<&QRat> for QRat {
            type Output = QRat;
            fn $m(self, rhs: &QRat) -> QRat {
                $body(&self, rhs)
            }
        }
        impl $tr<QRat> for &QRat {
            type Output = QRat;
            fn $m(self, rhs: QRat) -> QRat {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &QRat, b: &QRat| a.add_impl(b, false));
forward_binop!(Sub, sub, |a: &QRat, b: &QRat| a.add_impl(b, true));
forward_binop!(Mul, mul, |a: &QRat, b: &QRat| a.mul_impl(b));
forward_binop!(Div, div, |a: &QRat, b: &QRat| a.checked_div(b).expect("QRat division by zero"));

impl AddAssign<&QRat> for QRat {
    fn add_assign(&mut self, rhs: &QRat) {
        *self = self.add_impl(rhs, false);
    }
}

impl SubAssign<&QRat> for QRat {
    fn sub_assign(&mut self, rhs: &QRat) {
        *self = self.add_impl(rhs, true);
    }
}

impl MulAssign<&QRat> for QRat {
    fn mul_assign(&mut self, rhs: &QRat) {
        *self = self.mul_impl(rhs);
    }
}

impl Neg for QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat { num: self.num.neg(), den: self.den }
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat { num: self.num.neg(), den: self.den.clone() }
    }
}

/// `[n]_q = (q^n - q^-n)/(q - q^-1)`.
pub fn q_int(n: i64) -> QRat {
    if n == 0 {
        return QRat::zero();
    }
    // q^(1-|n|) (1 + q^2 + ... + q^(2|n|-2))
    let m = n.unsigned_abs() as usize;
    let mut cs = vec![BigInt::zero(); 2 * m - 1];
    for i in 0..m {
        cs[2 * i] = BigInt::one();
    }
    let mut v = QRat::new(ZPoly::from_coeffs(cs), ZPoly::monomial(BigInt::one(), m - 1)).unwrap();
    if n < 0 {
        v = -v;
    }
    v
}

/// `q^a - q^-a`.
pub fn q_diff(a: i64) -> QRat {
    QRat::q_pow(a) - QRat::q_pow(-a)
}

/// `q^a + q^-a`.
pub fn q_sum(a: i64) -> QRat {
    QRat::q_pow(a) + QRat::q_pow(-a)
}

/// The constant `rho = -(q^2 - q^-2)^2`.
pub fn rho() -> QRat {
    let d = q_diff(2);
    -(&d * &d)
}

/// The common scalar value of `G_0` and `Gt_0`: `-(q - q^-1) [2]_q^2`.
pub fn g0() -> QRat {
    let two = q_int(2);
    -(q_diff(1) * &two * &two)
}

/// Binomial coefficient as a field element.
pub fn binomial(n: u64, k: u64) -> QRat {
    if k > n {
        return QRat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    QRat::from_bigint(acc)
}
