//! Generators, words, free-algebra polynomials, degrees, weights and the
//! maps `sigma` and `dagger`.

use crate::qfield::{g0, QRat};
use std::cmp::Ordering;
use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// The four generator families, listed in PBW order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Family {
    G,
    Wminus,
    Wplus,
    Gtilde,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::G, Family::Wminus, Family::Wplus, Family::Gtilde];
}

/// An alternating generator. `k` selects `G_{k+1}`, `W_{-k}`, `W_{k+1}` or
/// `Gt_{k+1}`. The derived order is the PBW order: by family, then by `k`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Generator {
    pub family: Family,
    pub k: u32,
}

impl Generator {
    pub const fn new(family: Family, k: u32) -> Self {
        Generator { family, k }
    }

    /// `W_n` for any integer subscript.
    pub fn w(n: i64) -> Self {
        if n <= 0 {
            Generator::new(Family::Wminus, n.unsigned_abs() as u32)
        } else {
            Generator::new(Family::Wplus, (n - 1) as u32)
        }
    }

    /// `G_n`, `n >= 1`.
    pub fn g(n: u32) -> Self {
        assert!(n >= 1, "G_0 is a scalar");
        Generator::new(Family::G, n - 1)
    }

    /// `Gt_n`, `n >= 1`.
    pub fn gt(n: u32) -> Self {
        assert!(n >= 1, "Gt_0 is a scalar");
        Generator::new(Family::Gtilde, n - 1)
    }

    /// The subscript used in the usual notation.
    pub fn subscript(&self) -> i64 {
        match self.family {
            Family::Wminus => -(self.k as i64),
            _ => self.k as i64 + 1,
        }
    }

    pub fn degree(&self) -> u64 {
        match self.family {
            Family::Wminus | Family::Wplus => 2 * self.k as u64 + 1,
            Family::G | Family::Gtilde => 2 * self.k as u64 + 2,
        }
    }

    pub fn weight(&self) -> Weight {
        let k = self.k as i64;
        match self.family {
            Family::G => Weight::new(0, 0, k + 1),
            Family::Wminus => Weight::new(1, 0, k),
            Family::Wplus => Weight::new(1, 1, k),
            Family::Gtilde => Weight::new(2, 0, k + 1),
        }
    }

    pub fn sigma(&self) -> Self {
        let family = match self.family {
            Family::G => Family::Gtilde,
            Family::Gtilde => Family::G,
            Family::Wminus => Family::Wplus,
            Family::Wplus => Family::Wminus,
        };
        Generator::new(family, self.k)
    }

    /// Letter part of `dagger` (the word reversal happens in [`Word::dagger`]).
    pub fn dagger(&self) -> Self {
        let family = match self.family {
            Family::G => Family::Gtilde,
            Family::Gtilde => Family::G,
            f => f,
        };
        Generator::new(family, self.k)
    }

    /// All generators with `k <= max_k` in every family, in PBW order.
    pub fn all_up_to(max_k: u32) -> Vec<Generator> {
        Family::ALL.iter().flat_map(|&f| (0..=max_k).map(move |k| Generator::new(f, k))).collect()
    }
}

/// Strict total PBW order on generators.
pub fn gen_cmp(g: &Generator, h: &Generator) -> Ordering {
    g.cmp(h)
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::G => write!(f, "G[{}]", self.k + 1),
            Family::Gtilde => write!(f, "Gt[{}]", self.k + 1),
            _ => write!(f, "W[{}]", self.subscript()),
        }
    }
}

/// Subscript families as written in formulas, where `G_0`/`Gt_0` are scalars.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SubscriptFamily {
    G,
    Gtilde,
    W,
}

/// What an indexed symbol denotes: a generator, or a scalar for `G_0`, `Gt_0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Symbol {
    Letter(Generator),
    Scalar(QRat),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IndexError {
    #[error("negative subscript {0} for a G-type symbol")]
    NegativeG(i64),
}

pub fn symbol_from_subscript(family: SubscriptFamily, n: i64) -> Result<Symbol, IndexError> {
    match family {
        SubscriptFamily::W => Ok(Symbol::Letter(Generator::w(n))),
        SubscriptFamily::G | SubscriptFamily::Gtilde if n < 0 => Err(IndexError::NegativeG(n)),
        SubscriptFamily::G | SubscriptFamily::Gtilde if n == 0 => Ok(Symbol::Scalar(g0())),
        SubscriptFamily::G => Ok(Symbol::Letter(Generator::g(n as u32))),
        SubscriptFamily::Gtilde => Ok(Symbol::Letter(Generator::gt(n as u32))),
    }
}

/// An element `a xi^2 + b xi + c`, ordered lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Weight {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Weight {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Weight { a, b, c }
    }

    pub fn scaled(self, m: i64) -> Self {
        Weight::new(self.a * m, self.b * m, self.c * m)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        Weight::new(self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}xi^2 + {}xi + {}", self.a, self.b, self.c)
    }
}

/// A word in the generators; the empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: Generator) -> Self {
        Word(vec![g])
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(Generator::degree).sum()
    }

    /// `sum_i (n - i + 1) wt(a_i)` for letters `a_1..a_n`.
    pub fn weight(&self) -> Weight {
        let n = self.0.len() as i64;
        self.0.iter().enumerate().fold(Weight::default(), |acc, (i, g)| acc + g.weight().scaled(n - i as i64))
    }

    /// Letters are non-decreasing in PBW order.
    pub fn is_irreducible(&self) -> bool {
        self.first_descent().is_none()
    }

    /// Smallest `i` with `a_i > a_{i+1}` (0-based).
    pub fn first_descent(&self) -> Option<usize> {
        self.0.windows(2).position(|p| p[0] > p[1])
    }

    pub fn descents(&self) -> Vec<usize> {
        self.0.windows(2).enumerate().filter(|(_, p)| p[0] > p[1]).map(|(i, _)| i).collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn sigma(&self) -> Word {
        Word(self.0.iter().map(Generator::sigma).collect())
    }

    pub fn dagger(&self) -> Word {
        Word(self.0.iter().rev().map(Generator::dagger).collect())
    }
}

impl Ord for Word {
    /// Shortlex on the PBW letter order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// A finite linear combination of words over Q(q), with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, QRat>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(QRat::one())
    }

    pub fn scalar(c: QRat) -> Self {
        Self::term(Word::empty(), c)
    }

    pub fn term(w: Word, c: QRat) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, QRat::one())
    }

    pub fn letter(g: Generator) -> Self {
        Self::word(Word::letter(g))
    }

    /// Product of letters.
    pub fn monomial(letters: &[Generator]) -> Self {
        Self::word(Word(letters.to_vec()))
    }

    /// Element denoted by an indexed symbol.
    pub fn symbol(s: Symbol) -> Self {
        match s {
            Symbol::Letter(g) => Self::letter(g),
            Symbol::Scalar(c) => Self::scalar(c),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> btree_map::Iter<'_, Word, QRat> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> btree_map::IntoIter<Word, QRat> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, w: &Word) -> QRat {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Word, c: QRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &NCPoly, c: &QRat) {
        if c.is_zero() {
            return;
        }
        for (w, a) in &other.terms {
            self.add_term(w.clone(), if c.is_one() { a.clone() } else { a * c });
        }
    }

    pub fn scale(&self, c: &QRat) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly { terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect() }
    }

    pub fn map_words(&self, f: impl Fn(&Word) -> Word) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(f(w), c.clone());
        }
        out
    }

    pub fn sigma(&self) -> NCPoly {
        self.map_words(Word::sigma)
    }

    pub fn dagger(&self) -> NCPoly {
        self.map_words(Word::dagger)
    }

    /// `XY - YX`.
    pub fn commutator(&self, other: &NCPoly) -> NCPoly {
        self * other - other * self
    }

    /// `q XY - q^-1 YX`.
    pub fn q_commutator(&self, other: &NCPoly) -> NCPoly {
        self.qq_commutator(other, 1)
    }

    /// `q^e XY - q^-e YX`.
    pub fn qq_commutator(&self, other: &NCPoly, e: i64) -> NCPoly {
        (self * other).scale(&QRat::q_pow(e)) - (other * self).scale(&QRat::q_pow(-e))
    }

    pub fn max_degree(&self) -> u64 {
        self.terms.keys().map(Word::degree).max().unwrap_or(0)
    }

    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(Word::is_irreducible)
    }

    pub fn contains_letter(&self, g: &Generator) -> bool {
        self.terms.keys().any(|w| w.0.contains(g))
    }

    /// The coefficient of the empty word.
    pub fn constant_term(&self) -> QRat {
        self.coeff(&Word::empty())
    }
}

impl fmt::Display for NCPoly {
    /// Terms as `(scalar)*word`, joined by ` + `; a scalar of `1` is omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match (c.is_one(), w.is_empty()) {
                (true, _) => write!(f, "{w}")?,
                (false, true) => write!(f, "({c})")?,
                (false, false) => write!(f, "({c})*{w}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCPoly({self})")
    }
}

impl AddAssign<&NCPoly> for NCPoly {
    fn add_assign(&mut self, rhs: &NCPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl SubAssign<&NCPoly> for NCPoly {
    fn sub_assign(&mut self, rhs: &NCPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c);
        }
    }
}

impl Add<&NCPoly> for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&NCPoly> for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for NCPoly {
    type Output = NCPoly;
    fn add(mut self, rhs: NCPoly) -> NCPoly {
        self += &rhs;
        self
    }
}

impl Sub for NCPoly {
    type Output = NCPoly;
    fn sub(mut self, rhs: NCPoly) -> NCPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

impl Neg for NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        -&self
    }
}

impl Mul<&NCPoly> for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }
}

impl Mul for NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: NCPoly) -> NCPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::q_int;
    use proptest::prelude::*;

    fn w(n: i64) -> Generator {
        Generator::w(n)
    }

    fn word(gs: &[Generator]) -> Word {
        Word(gs.to_vec())
    }

    #[test]
    fn order_examples() {
        assert_eq!(gen_cmp(&Generator::g(3), &w(0)), Ordering::Less);
        assert_eq!(gen_cmp(&w(0), &w(-1)), Ordering::Less);
        assert_eq!(gen_cmp(&w(2), &w(2)), Ordering::Equal);
        assert_eq!(gen_cmp(&w(5), &Generator::gt(1)), Ordering::Less);
        assert_eq!(gen_cmp(&w(-5), &w(1)), Ordering::Less);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(word(&[w(2), w(-1), Generator::g(3), w(4)]).degree(), 19);
        assert_eq!(Word::empty().degree(), 0);
        assert_eq!(Word::letter(Generator::gt(1)).degree(), 2);
    }

    #[test]
    fn weight_examples() {
        assert_eq!(word(&[w(2), w(-1), Generator::g(3), w(4)]).weight(), Weight::new(8, 5, 16));
        assert_eq!(word(&[w(3), Generator::gt(4), w(-1), w(-2)]).weight(), Weight::new(13, 4, 24));
        assert_eq!(Word::empty().weight(), Weight::default());
    }

    #[test]
    fn irreducible_examples() {
        assert!(word(&[w(0), w(1)]).is_irreducible());
        assert!(!word(&[w(1), w(0)]).is_irreducible());
        assert!(Word::empty().is_irreducible());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(NCPoly::letter(w(0)).sigma(), NCPoly::letter(w(1)));
        let p = NCPoly::monomial(&[Generator::g(2), w(-3)]);
        assert_eq!(p.sigma().sigma(), p);
        let mut src = NCPoly::term(word(&[Generator::g(1), w(0)]), QRat::q());
        src.add_term(word(&[w(2)]), QRat::one());
        let mut want = NCPoly::term(word(&[Generator::gt(1), w(1)]), QRat::q());
        want.add_term(word(&[w(-1)]), QRat::one());
        assert_eq!(src.sigma(), want);
    }

    #[test]
    fn dagger_examples() {
        let p = NCPoly::monomial(&[w(0), Generator::g(1)]);
        assert_eq!(p.dagger(), NCPoly::monomial(&[Generator::gt(1), w(0)]));
        let r = NCPoly::monomial(&[w(2), Generator::gt(3), w(-1)]);
        assert_eq!(r.dagger().dagger(), r);
        assert_eq!(p.dagger().sigma(), p.sigma().dagger());
        assert_eq!(p.dagger().sigma(), NCPoly::monomial(&[Generator::g(1), w(1)]));
    }

    #[test]
    fn subscripts() {
        assert_eq!(
            symbol_from_subscript(SubscriptFamily::W, -2),
            Ok(Symbol::Letter(Generator::new(Family::Wminus, 2)))
        );
        assert_eq!(symbol_from_subscript(SubscriptFamily::G, 0), Ok(Symbol::Scalar(g0())));
        assert_eq!(symbol_from_subscript(SubscriptFamily::W, 3), Ok(Symbol::Letter(Generator::new(Family::Wplus, 2))));
        assert!(symbol_from_subscript(SubscriptFamily::Gtilde, -1).is_err());
        let expect = -(crate::qfield::q_diff(1) * q_int(2) * q_int(2));
        assert_eq!(symbol_from_subscript(SubscriptFamily::Gtilde, 0), Ok(Symbol::Scalar(expect)));
    }

    #[test]
    fn all_up_to_counts() {
        assert_eq!(Generator::all_up_to(6).len(), 28);
        assert_eq!(Generator::all_up_to(0), vec![Generator::g(1), w(0), w(1), Generator::gt(1)]);
    }

    #[test]
    fn gen_cmp_is_strict_total() {
        let mut gens = Vec::new();
        for f in Family::ALL {
            for k in 0..=10 {
                gens.push(Generator::new(f, k));
            }
        }
        for a in &gens {
            for b in &gens {
                assert_eq!(gen_cmp(a, b) == Ordering::Equal, a == b);
                assert_eq!(gen_cmp(a, b), gen_cmp(b, a).reverse());
                for c in &gens {
                    if gen_cmp(a, b) == Ordering::Less && gen_cmp(b, c) == Ordering::Less {
                        assert_eq!(gen_cmp(a, c), Ordering::Less);
                    }
                }
            }
        }
    }

    fn arb_gen(max_k: u32) -> impl Strategy<Value = Generator> {
        (0..4usize, 0..=max_k).prop_map(|(f, k)| Generator::new(Family::ALL[f], k))
    }

    fn arb_word(max_len: usize, max_k: u32) -> impl Strategy<Value = Word> {
        prop::collection::vec(arb_gen(max_k), 0..=max_len).prop_map(Word)
    }

    fn arb_poly() -> impl Strategy<Value = NCPoly> {
        prop::collection::vec((arb_word(4, 3), -3i64..=3, -2i64..=2), 0..=5).prop_map(|ts| {
            let mut p = NCPoly::zero();
            for (w, c, e) in ts {
                p.add_term(w, QRat::from_int(c) * QRat::q_pow(e));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn weight_is_position_weighted_sum(u in arb_word(5, 4), v in arb_word(5, 4)) {
            let uv = u.concat(&v);
            let n = uv.len() as i64;
            let mut direct = Weight::default();
            for (i, g) in uv.letters().iter().enumerate() {
                direct = direct + g.weight().scaled(n - i as i64);
            }
            prop_assert_eq!(uv.weight(), direct);
            // Prefixing shifts every position coefficient of u by |v|.
            let shift = u.letters().iter().fold(Weight::default(), |a, g| a + g.weight());
            prop_assert_eq!(uv.weight(), u.weight() + shift.scaled(v.len() as i64) + v.weight());
        }

        #[test]
        fn sigma_dagger_commuting_involutions(p in arb_poly()) {
            prop_assert_eq!(p.sigma().sigma(), p.clone());
            prop_assert_eq!(p.dagger().dagger(), p.clone());
            prop_assert_eq!(p.sigma().dagger(), p.dagger().sigma());
        }

        #[test]
        fn sigma_is_hom_dagger_is_antihom(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!((&a * &b).sigma(), &a.sigma() * &b.sigma());
            prop_assert_eq!((&a * &b).dagger(), &b.dagger() * &a.dagger());
        }

        #[test]
        fn weight_order_total_and_additive(
            u in (-50i64..50, -50i64..50, -50i64..50),
            v in (-50i64..50, -50i64..50, -50i64..50),
            x in (-50i64..50, -50i64..50, -50i64..50),
        ) {
            let (u, v, x) = (Weight::new(u.0, u.1, u.2), Weight::new(v.0, v.1, v.2), Weight::new(x.0, x.1, x.2));
            prop_assert!(u <= v || v <= u);
            if u <= v {
                prop_assert!(u + x <= v + x);
            }
        }
    }
}
