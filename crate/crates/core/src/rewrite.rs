//! Reduction rules for reducible generator pairs, PBW normal forms and the
//! overlap (confluence) checker.
//!
//! Rule bodies are generated from their summation formulas for arbitrary
//! indices. Subscripts are resolved through [`symbol_from_subscript`], so
//! `G_0` and `Gt_0` enter as scalars.

use crate::qfield::{q_diff, q_int, QRat};
use crate::report::{CaseResult, CheckReport};
use crate::words::{symbol_from_subscript, Family, Generator, NCPoly, SubscriptFamily, Weight, Word};
use rayon::prelude::*;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("pair {0}*{1} is not reducible")]
    IrreduciblePair(Generator, Generator),
    #[error("word {0} is not an overlap ambiguity")]
    NotAnOverlap(Word),
}

/// Which reduction rule applies to a pair.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub enum RuleId {
    #[serde(rename = "i_GG")]
    IGG,
    #[serde(rename = "i_WmWm")]
    IWmWm,
    #[serde(rename = "i_WpWp")]
    IWpWp,
    #[serde(rename = "i_GtGt")]
    IGtGt,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "vi")]
    VI,
    #[serde(rename = "vii")]
    VII,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleId::IGG => "i_GG",
            RuleId::IWmWm => "i_WmWm",
            RuleId::IWpWp => "i_WpWp",
            RuleId::IGtGt => "i_GtGt",
            RuleId::II => "ii",
            RuleId::III => "iii",
            RuleId::IV => "iv",
            RuleId::V => "v",
            RuleId::VI => "vi",
            RuleId::VII => "vii",
        };
        f.write_str(s)
    }
}

/// The rule for `a*b`, or `None` when `a <= b`.
pub fn rule_for(a: &Generator, b: &Generator) -> Option<RuleId> {
    use Family::*;
    if a <= b {
        return None;
    }
    Some(match (a.family, b.family) {
        (G, G) => RuleId::IGG,
        (Wminus, Wminus) => RuleId::IWmWm,
        (Wplus, Wplus) => RuleId::IWpWp,
        (Gtilde, Gtilde) => RuleId::IGtGt,
        (Wplus, Wminus) => RuleId::II,
        (Gtilde, G) => RuleId::III,
        (Wplus, G) => RuleId::IV,
        (Wminus, G) => RuleId::V,
        (Gtilde, Wplus) => RuleId::VI,
        (Gtilde, Wminus) => RuleId::VII,
        _ => unreachable!("a > b forces a higher or equal family"),
    })
}

/// One rewrite of a reducible pair.
#[derive(Clone, Debug)]
pub struct RuleApplication {
    pub rule_id: RuleId,
    pub left_pair: (Generator, Generator),
    pub result: NCPoly,
}

fn sym(f: SubscriptFamily, n: i64) -> NCPoly {
    NCPoly::symbol(symbol_from_subscript(f, n).expect("rule subscripts are in range"))
}

/// Product of two indexed symbols.
fn pair(f1: SubscriptFamily, n1: i64, f2: SubscriptFamily, n2: i64) -> NCPoly {
    &sym(f1, n1) * &sym(f2, n2)
}

/// Builds the right-hand side of the rule for `a*b`.
fn build_rule(a: Generator, b: Generator, id: RuleId) -> NCPoly {
    use SubscriptFamily::{Gtilde as T, G, W};
    let i = a.k as i64;
    let j = b.k as i64;
    let m = i.min(j);
    let swapped = NCPoly::monomial(&[b, a]);
    let mut out = swapped;
    match id {
        RuleId::IGG | RuleId::IWmWm | RuleId::IWpWp | RuleId::IGtGt => {}
        RuleId::II => {
            // W_{i+1} W_{-j}
            let kappa = q_diff(2) * q_int(2) * q_int(2);
            let c = kappa.inv();
            let mut s = NCPoly::zero();
            for l in 0..=m {
                s += &pair(G, l, T, i + j + 1 - l);
                s -= &pair(G, i + j + 1 - l, T, l);
            }
            out.add_scaled(&s, &c);
        }
        RuleId::III => {
            // Gt_{i+1} G_{j+1}
            let d = q_diff(2);
            let c = &d * &d * &d;
            let mut s = NCPoly::zero();
            s -= &pair(W, -i, W, -j);
            s += &pair(W, i + 1, W, j + 1);
            for l in 0..=m {
                s += &pair(W, -l, W, i + j + 2 - l);
                s -= &pair(W, l - 1 - i - j, W, l + 1);
            }
            for l in 1..=m {
                s -= &pair(W, 1 - l, W, i + j + 1 - l);
                s += &pair(W, l - i - j, W, l);
            }
            out.add_scaled(&s, &c);
        }
        RuleId::IV => {
            // W_{i+1} G_{j+1}
            let d = QRat::q() * q_diff(1);
            let mut s = NCPoly::zero();
            for l in 0..=m {
                s += &pair(G, l, W, l - i - j);
                s += &pair(G, i + j + 1 - l, W, l + 1);
                s -= &pair(G, l, W, i + j + 2 - l);
            }
            for l in 1..=m {
                s -= &pair(G, i + j + 1 - l, W, 1 - l);
            }
            out.add_scaled(&s, &d);
        }
        RuleId::V => {
            // W_{-i} G_{j+1}
            let e = QRat::q_pow(-1) * q_diff(1);
            let mut s = NCPoly::zero();
            for l in 0..=m {
                s -= &pair(G, l, W, i + j + 1 - l);
                s += &pair(G, l, W, l - 1 - i - j);
                s -= &pair(G, i + j + 1 - l, W, -l);
            }
            for l in 1..=m {
                s += &pair(G, i + j + 1 - l, W, l);
            }
            out.add_scaled(&s, &e);
        }
        RuleId::VI => {
            // Gt_{i+1} W_{j+1}
            let d = QRat::q() * q_diff(1);
            let mut s = NCPoly::zero();
            for l in 0..=m {
                s += &pair(W, l - i - j, T, l);
                s += &pair(W, l + 1, T, i + j + 1 - l);
                s -= &pair(W, i + j + 2 - l, T, l);
            }
            for l in 1..=m {
                s -= &pair(W, 1 - l, T, i + j + 1 - l);
            }
            out.add_scaled(&s, &d);
        }
        RuleId::VII => {
            // Gt_{i+1} W_{-j}
            let e = QRat::q_pow(-1) * q_diff(1);
            let mut s = NCPoly::zero();
            for l in 0..=m {
                s -= &pair(W, i + j + 1 - l, T, l);
                s += &pair(W, l - 1 - i - j, T, l);
                s -= &pair(W, -l, T, i + j + 1 - l);
            }
            for l in 1..=m {
                s += &pair(W, l, T, i + j + 1 - l);
            }
            out.add_scaled(&s, &e);
        }
    }
    out
}

thread_local! {
    static RULE_CACHE: RefCell<HashMap<(Generator, Generator), Rc<NCPoly>>> = RefCell::new(HashMap::new());
}

/// Cached rule body for a pair known to be reducible.
fn cached_rule(a: Generator, b: Generator) -> Rc<NCPoly> {
    RULE_CACHE.with(|c| {
        if let Some(r) = c.borrow().get(&(a, b)) {
            return r.clone();
        }
        let id = rule_for(&a, &b).expect("reducible pair");
        let r = Rc::new(build_rule(a, b, id));
        c.borrow_mut().insert((a, b), r.clone());
        r
    })
}

/// `a*b` rewritten by its reduction rule.
pub fn apply_rule(a: &Generator, b: &Generator) -> Result<NCPoly, RewriteError> {
    rule_application(a, b).map(|app| app.result)
}

pub fn rule_application(a: &Generator, b: &Generator) -> Result<RuleApplication, RewriteError> {
    let rule_id = rule_for(a, b).ok_or(RewriteError::IrreduciblePair(*a, *b))?;
    Ok(RuleApplication { rule_id, left_pair: (*a, *b), result: (*cached_rule(*a, *b)).clone() })
}

/// The termination measure: length first, then weight.
fn measure(w: &Word) -> (usize, Weight) {
    (w.len(), w.weight())
}

/// True iff substituting `app.result` for the pair at `position` of `host`
/// yields only words strictly below `host` in (length, weight).
pub fn measure_decreases(host: &Word, position: usize, app: &RuleApplication) -> bool {
    let letters = host.letters();
    assert!(
        position + 1 < letters.len() && (letters[position], letters[position + 1]) == app.left_pair,
        "rule does not apply at this position"
    );
    let h = measure(host);
    app.result.terms().all(|(r, _)| measure(&splice(host, position, r)) < h)
}

/// `host` with letters `position, position+1` replaced by `r`.
fn splice(host: &Word, position: usize, r: &Word) -> Word {
    let l = host.letters();
    let mut v = Vec::with_capacity(l.len() + r.len());
    v.extend_from_slice(&l[..position]);
    v.extend_from_slice(r.letters());
    v.extend_from_slice(&l[position + 2..]);
    Word(v)
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    len: usize,
    weight: Weight,
    word: Word,
}

impl Key {
    fn new(word: Word) -> Self {
        Key { len: word.len(), weight: word.weight(), word }
    }
}

/// Reduces `p` to a combination of irreducible words, rewriting at the
/// position chosen by `pick` (which receives a reducible word and must return
/// one of its descent positions).
///
/// Words are processed from the largest (length, weight) down. Every rewrite
/// produces strictly smaller words, so each word is expanded at most once with
/// its fully merged coefficient. A rewrite that fails to decrease the measure
/// is a bug in a rule body and panics.
pub fn normal_form_by(p: &NCPoly, mut pick: impl FnMut(&Word) -> usize) -> NCPoly {
    let mut out = NCPoly::zero();
    let mut work: BTreeMap<Key, QRat> = BTreeMap::new();
    for (w, c) in p.terms() {
        if w.is_irreducible() {
            out.add_term(w.clone(), c.clone());
        } else {
            push(&mut work, w.clone(), c.clone());
        }
    }
    while let Some((key, c)) = work.pop_last() {
        let host = key.word;
        let pos = pick(&host);
        let (a, b) = (host.letters()[pos], host.letters()[pos + 1]);
        debug_assert!(a > b, "picked position is not a descent");
        let body = cached_rule(a, b);
        let hm = (key.len, key.weight);
        for (r, rc) in body.terms() {
            let w = splice(&host, pos, r);
            let wm = measure(&w);
            assert!(wm < hm, "rewrite of {host} at {pos} produced non-descendant {w}");
            let coeff = &c * rc;
            if w.is_irreducible() {
                out.add_term(w, coeff);
            } else {
                push(&mut work, w, coeff);
            }
        }
    }
    out
}

fn push(work: &mut BTreeMap<Key, QRat>, w: Word, c: QRat) {
    use std::collections::btree_map::Entry;
    match work.entry(Key::new(w)) {
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

/// PBW normal form, rewriting the leftmost descent first.
pub fn normal_form(p: &NCPoly) -> NCPoly {
    normal_form_by(p, |w| w.first_descent().expect("reducible word"))
}

/// Outcome of resolving one overlap ambiguity.
#[derive(Clone, Debug)]
pub struct OverlapReport {
    pub word: Word,
    pub agrees: bool,
    pub nf_left: NCPoly,
    pub nf_right: NCPoly,
}

/// Resolves the overlap `abc` both ways: first rewriting `ab`, then first
/// rewriting `bc`.
pub fn check_overlap(w: &Word) -> Result<OverlapReport, RewriteError> {
    let l = w.letters();
    if l.len() != 3 || !(l[0] > l[1] && l[1] > l[2]) {
        return Err(RewriteError::NotAnOverlap(w.clone()));
    }
    let left = &apply_rule(&l[0], &l[1])? * &NCPoly::letter(l[2]);
    let right = &NCPoly::letter(l[0]) * &apply_rule(&l[1], &l[2])?;
    let nf_left = normal_form(&left);
    let nf_right = normal_form(&right);
    Ok(OverlapReport { word: w.clone(), agrees: nf_left == nf_right, nf_left, nf_right })
}

/// All overlap ambiguities with every generator index `k <= bound`, grouped
/// by type: distinct families (type i), equal leading pair (ii), equal
/// trailing pair (iii), one family throughout (iv).
pub fn enumerate_overlaps(bound: u32) -> Vec<Word> {
    use Family::*;
    let ks = || 0..=bound;
    let mut out = Vec::new();
    let distinct = [(Wplus, Wminus, G), (Gtilde, Wminus, G), (Gtilde, Wplus, G), (Gtilde, Wplus, Wminus)];
    for (f1, f2, f3) in distinct {
        for i in ks() {
            for j in ks() {
                for k in ks() {
                    out.push(Word(vec![Generator::new(f1, i), Generator::new(f2, j), Generator::new(f3, k)]));
                }
            }
        }
    }
    let leading = [(Wminus, G), (Wplus, G), (Gtilde, G), (Wplus, Wminus), (Gtilde, Wminus), (Gtilde, Wplus)];
    for (f, g) in leading {
        for i in ks() {
            for j in 0..i {
                for k in ks() {
                    out.push(Word(vec![Generator::new(f, i), Generator::new(f, j), Generator::new(g, k)]));
                }
            }
        }
    }
    let trailing = [(Wminus, G), (Wplus, G), (Gtilde, G), (Wplus, Wminus), (Gtilde, Wminus), (Gtilde, Wplus)];
    for (f, g) in trailing {
        for i in ks() {
            for j in ks() {
                for k in 0..j {
                    out.push(Word(vec![Generator::new(f, i), Generator::new(g, j), Generator::new(g, k)]));
                }
            }
        }
    }
    for f in Family::ALL {
        for i in ks() {
            for j in 0..i {
                for k in 0..j {
                    out.push(Word(vec![Generator::new(f, i), Generator::new(f, j), Generator::new(f, k)]));
                }
            }
        }
    }
    out
}

/// Type of an overlap word `abc` by which families coincide: 1 when all
/// three differ, 2 when only `a` and `b` share one, 3 when only `b` and `c`
/// do, 4 when all three do.
pub fn overlap_type(w: &Word) -> Option<u8> {
    match w.letters() {
        [a, b, c] => Some(match (a.family == b.family, b.family == c.family) {
            (false, false) if a.family != c.family => 1,
            (true, false) => 2,
            (false, true) => 3,
            (true, true) => 4,
            _ => return None,
        }),
        _ => None,
    }
}

/// Resolves every overlap with indices `<= bound`, in parallel.
pub fn check_ambiguities(bound: u32) -> CheckReport {
    let words = enumerate_overlaps(bound);
    let results = words
        .par_iter()
        .map(|w| {
            let ty = ["i", "ii", "iii", "iv"][overlap_type(w).expect("overlap word") as usize - 1];
            match check_overlap(w) {
                Ok(r) if r.agrees => CaseResult::new(format!("{ty}:{w}"), true, format!("{} terms", r.nf_left.len())),
                Ok(r) => CaseResult::new(format!("{ty}:{w}"), false, format!("{} vs {}", r.nf_left, r.nf_right)),
                Err(e) => CaseResult::new(format!("{ty}:{w}"), false, e.to_string()),
            }
        })
        .collect();
    CheckReport { suite: format!("ambiguities(bound={bound})"), results }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: i64) -> Generator {
        Generator::w(n)
    }
    fn g(n: u32) -> Generator {
        Generator::g(n)
    }
    fn gt(n: u32) -> Generator {
        Generator::gt(n)
    }
    fn mono(gs: &[Generator]) -> NCPoly {
        NCPoly::monomial(gs)
    }

    #[test]
    fn rule_ii_base_case() {
        let got = apply_rule(&w(1), &w(0)).unwrap();
        let mut want = mono(&[w(0), w(1)]);
        let c = q_int(2).inv();
        want.add_scaled(&NCPoly::letter(gt(1)), &-&c);
        want.add_scaled(&NCPoly::letter(g(1)), &c);
        assert_eq!(got, want);
    }

    #[test]
    fn rule_iii_base_case() {
        let got = apply_rule(&gt(1), &g(1)).unwrap();
        let d = q_diff(2);
        let c = &d * &d * &d;
        let mut want = mono(&[g(1), gt(1)]);
        want.add_scaled(&mono(&[w(0), w(0)]), &-&c);
        want.add_scaled(&mono(&[w(1), w(1)]), &c);
        want.add_scaled(&mono(&[w(0), w(2)]), &c);
        want.add_scaled(&mono(&[w(-1), w(1)]), &-&c);
        assert_eq!(got, want);
    }

    #[test]
    fn rule_i_swap() {
        assert_eq!(apply_rule(&w(-2), &w(-1)).unwrap(), mono(&[w(-1), w(-2)]));
        assert_eq!(rule_for(&w(-2), &w(-1)), Some(RuleId::IWmWm));
    }

    #[test]
    fn irreducible_pair_is_rejected() {
        assert_eq!(apply_rule(&w(0), &w(1)), Err(RewriteError::IrreduciblePair(w(0), w(1))));
        assert!(apply_rule(&w(2), &w(2)).is_err());
    }

    #[test]
    fn normal_form_examples() {
        let p = mono(&[w(0), w(1)]);
        assert_eq!(normal_form(&p), p);
        let c = &mono(&[w(1), w(0)]) - &mono(&[w(0), w(1)]);
        let mut want = NCPoly::zero();
        let s = q_int(2).inv();
        want.add_scaled(&NCPoly::letter(g(1)), &s);
        want.add_scaled(&NCPoly::letter(gt(1)), &-&s);
        assert_eq!(normal_form(&c), want);
    }

    #[test]
    fn measure_examples() {
        let app = rule_application(&w(1), &w(0)).unwrap();
        assert!(measure_decreases(&Word(vec![w(1), w(0)]), 0, &app));
        let app = rule_application(&w(-1), &w(0)).unwrap();
        assert!(measure_decreases(&Word(vec![w(-1), w(0), g(1)]), 0, &app));
        let app = rule_application(&g(3), &g(2)).unwrap();
        assert!(measure_decreases(&Word(vec![w(4), g(3), g(2), w(0)]), 1, &app));
    }

    #[test]
    fn every_rule_descends_and_keeps_degree() {
        let gens = Generator::all_up_to(4);
        for a in &gens {
            for b in &gens {
                let Ok(app) = rule_application(a, b) else { continue };
                let host = Word(vec![*a, *b]);
                assert!(measure_decreases(&host, 0, &app), "{host}");
                for (r, _) in app.result.terms() {
                    assert!(!r.is_empty(), "{host} produced a scalar term");
                    assert!(r.degree() <= host.degree(), "{host} -> {r}");
                }
            }
        }
    }

    #[test]
    fn overlap_examples() {
        assert!(check_overlap(&Word(vec![w(1), w(0), g(1)])).unwrap().agrees);
        let r = check_overlap(&Word(vec![g(3), g(2), g(1)])).unwrap();
        assert!(r.agrees);
        assert_eq!(r.nf_left, mono(&[g(1), g(2), g(3)]));
        assert!(check_overlap(&Word(vec![gt(2), gt(1), w(-1)])).unwrap().agrees);
        assert!(check_overlap(&Word(vec![w(0), w(1), g(1)])).is_err());
    }

    fn brute_overlaps(bound: u32) -> Vec<Word> {
        let gens = Generator::all_up_to(bound);
        let mut out = Vec::new();
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    if a > b && b > c {
                        out.push(Word(vec![*a, *b, *c]));
                    }
                }
            }
        }
        out
    }

    fn closed_form(b: u64) -> usize {
        let n = b + 1;
        (4 * n * n * n + 12 * (n * (n - 1) / 2) * n + 4 * (n * (n - 1) * n.saturating_sub(2) / 6)) as usize
    }

    #[test]
    fn overlap_enumeration_is_complete() {
        for bound in 0..=3 {
            let mut got = enumerate_overlaps(bound);
            let mut want = brute_overlaps(bound);
            assert_eq!(got.len(), closed_form(bound as u64));
            got.sort();
            want.sort();
            assert_eq!(got, want);
        }
        assert_eq!(enumerate_overlaps(0).len(), 4);
        assert_eq!(enumerate_overlaps(3).len(), 560);
    }

    #[test]
    fn overlap_types_partition_the_enumeration() {
        let mut counts = [0usize; 4];
        for w in enumerate_overlaps(3) {
            counts[overlap_type(&w).unwrap() as usize - 1] += 1;
        }
        // 4 (b+1)^3, 6 C(b+1,2)(b+1) twice, 4 C(b+1,3) at b = 3.
        assert_eq!(counts, [256, 144, 144, 16]);
        assert_eq!(overlap_type(&Word(vec![w(0)])), None);
    }

    #[test]
    fn ambiguities_small() {
        let rep = check_ambiguities(1);
        assert_eq!(rep.len(), enumerate_overlaps(1).len());
        assert!(rep.passed(), "{}", rep.summary());
    }

    #[test]
    fn soundness_of_pairs() {
        let gens = Generator::all_up_to(4);
        for a in &gens {
            for b in &gens {
                if let Ok(r) = apply_rule(a, b) {
                    assert_eq!(normal_form(&mono(&[*a, *b])), normal_form(&r));
                }
            }
        }
    }

    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn arb_word() -> impl Strategy<Value = Word> {
        let gen = (0..4usize, 0..=3u32).prop_map(|(f, k)| Generator::new(Family::ALL[f], k));
        prop::collection::vec(gen, 0..=4).prop_map(Word)
    }

    fn arb_poly() -> impl Strategy<Value = NCPoly> {
        prop::collection::vec((arb_word(), -3i64..=3, -2i64..=2), 0..=3).prop_map(|ts| {
            let mut p = NCPoly::zero();
            for (w, c, e) in ts {
                p.add_term(w, QRat::from_int(c) * QRat::q_pow(e));
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn random_strategy_agrees_with_leftmost(w in arb_word()) {
            let p = NCPoly::word(w);
            let want = normal_form(&p);
            for seed in 0..20u64 {
                let mut rng = StdRng::seed_from_u64(seed);
                let got = normal_form_by(&p, |x| {
                    let ds = x.descents();
                    ds[rng.random_range(0..ds.len())]
                });
                prop_assert_eq!(&got, &want, "seed {}", seed);
            }
        }

        #[test]
        fn reduction_does_not_raise_degree(w in arb_word()) {
            let nf = normal_form(&NCPoly::word(w.clone()));
            prop_assert!(nf.is_normal());
            for (x, _) in nf.terms() {
                prop_assert!(x.degree() <= w.degree(), "{} has degree above {}", x, w);
            }
        }

        #[test]
        fn symmetries_commute_with_reduction(p in arb_poly()) {
            let nf = normal_form(&p);
            prop_assert_eq!(normal_form(&p.sigma()), normal_form(&nf.sigma()));
            prop_assert_eq!(normal_form(&p.dagger()), normal_form(&nf.dagger()));
        }
    }
}
