//! The defining relations, as polynomials `LHS - RHS` in the free algebra.

use crate::qfield::{q_int, rho};
use crate::report::{CaseResult, CheckReport};
use crate::rewrite::normal_form;
use crate::words::{Family, Generator, NCPoly};
use rayon::prelude::*;

/// A named relation instance.
#[derive(Clone, Debug)]
pub struct Relation {
    pub family: &'static str,
    pub k: u32,
    pub l: Option<u32>,
    pub poly: NCPoly,
}

impl Relation {
    pub fn name(&self) -> String {
        match self.l {
            Some(l) => format!("{}(k={},l={})", self.family, self.k, l),
            None => format!("{}(k={})", self.family, self.k),
        }
    }
}

fn x(f: Family, k: u32) -> NCPoly {
    NCPoly::letter(Generator::new(f, k))
}

fn w(n: i64) -> NCPoly {
    NCPoly::letter(Generator::w(n))
}

/// Names of the eleven relation families, in the order they are generated.
pub const FAMILIES: [&str; 11] = [
    "w0_wplus",
    "w0_g_qcomm",
    "g_w1_qcomm",
    "w_same_sign",
    "wminus_wplus",
    "wminus_g",
    "wminus_gt",
    "wplus_g",
    "wplus_gt",
    "g_same",
    "gt_g",
];

/// Every defining relation with indices `k, l <= bound`.
pub fn defining_relations(bound: u32) -> Vec<Relation> {
    use Family::{Gtilde, Wminus, Wplus, G};
    let mut out = Vec::new();
    let two = q_int(2);
    let r = rho();
    let one = |family, k, poly| Relation { family, k, l: None, poly };
    for k in 0..=bound {
        let ki = k as i64;
        let gdiff = (&x(Gtilde, k) - &x(G, k)).scale(&two.inv());
        out.push(one("w0_wplus", k, &w(0).commutator(&x(Wplus, k)) - &gdiff));
        out.push(one("w0_wplus", k, &x(Wminus, k).commutator(&w(1)) - &gdiff));
        let rhs2 = (&w(-ki - 1) - &w(ki + 1)).scale(&r);
        out.push(one("w0_g_qcomm", k, &w(0).q_commutator(&x(G, k)) - &rhs2));
        out.push(one("w0_g_qcomm", k, &x(Gtilde, k).q_commutator(&w(0)) - &rhs2));
        let rhs3 = (&w(ki + 2) - &w(-ki)).scale(&r);
        out.push(one("g_w1_qcomm", k, &x(G, k).q_commutator(&w(1)) - &rhs3));
        out.push(one("g_w1_qcomm", k, &w(1).q_commutator(&x(Gtilde, k)) - &rhs3));
    }
    let two_index = |f: &'static str, a: Family, b: Family, k: u32, l: u32| Relation {
        family: f,
        k,
        l: Some(l),
        poly: &x(a, k).commutator(&x(b, l)) + &x(b, k).commutator(&x(a, l)),
    };
    for k in 0..=bound {
        for l in 0..=bound {
            let pair =
                |f, a: Family, b: Family| Relation { family: f, k, l: Some(l), poly: x(a, k).commutator(&x(b, l)) };
            out.push(pair("w_same_sign", Wminus, Wminus));
            out.push(pair("w_same_sign", Wplus, Wplus));
            out.push(two_index("wminus_wplus", Wminus, Wplus, k, l));
            out.push(two_index("wminus_g", Wminus, G, k, l));
            out.push(two_index("wminus_gt", Wminus, Gtilde, k, l));
            out.push(two_index("wplus_g", Wplus, G, k, l));
            out.push(two_index("wplus_gt", Wplus, Gtilde, k, l));
            out.push(pair("g_same", G, G));
            out.push(pair("g_same", Gtilde, Gtilde));
            out.push(two_index("gt_g", Gtilde, G, k, l));
        }
    }
    out
}

/// Reduces every defining relation with indices `<= bound` to normal form.
pub fn check_relations(bound: u32) -> CheckReport {
    let rels = defining_relations(bound);
    let results: Vec<CaseResult> = rels
        .par_iter()
        .map(|r| {
            let nf = normal_form(&r.poly);
            let detail = if nf.is_zero() { "0".to_string() } else { format!("residue {nf}") };
            CaseResult::new(r.name(), nf.is_zero(), detail)
        })
        .collect();
    CheckReport { suite: "relations".into(), results }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_count() {
        // 6 one-index relations per k, 10 two-index relations per (k, l).
        assert_eq!(defining_relations(4).len(), 6 * 5 + 10 * 25);
        let fams: std::collections::BTreeSet<_> = defining_relations(0).iter().map(|r| r.family).collect();
        assert_eq!(fams.len(), FAMILIES.len());
    }

    #[test]
    fn relations_hold_small() {
        let rep = check_relations(2);
        assert!(rep.passed(), "{}", rep.summary());
    }

    #[test]
    fn sigma_and_dagger_preserve_relations() {
        for r in defining_relations(3) {
            assert!(normal_form(&r.poly.sigma()).is_zero(), "sigma {}", r.name());
            assert!(normal_form(&r.poly.dagger()).is_zero(), "dagger {}", r.name());
        }
    }
}
