//! The series `Z(t)`, the central elements `Z_n` and `Zbar_n`, and the
//! checks built on them: centrality, generator recovery, the matrix
//! factorization of `Z(t)` and the q-Dolan/Grady relations.
//!
//! Series here are in the single variable `t` (`Var::T`). Substituting the
//! series `S` and `T` into a generating function goes through the down
//! transforms, never through generic composition.

use crate::qfield::{binomial, g0, q_diff, q_int, q_sum, QRat};
use crate::report::{CaseResult, CheckReport};
use crate::rewrite::normal_form;
use crate::series::{gf_coeff, TruncSeries, Var};
use crate::words::{Family, Generator, NCPoly};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::convert::Infallible;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CentralError {
    #[error("Zbar_n is defined only for n >= 1")]
    BarAtZero,
    #[error("no Z_{0} supplied")]
    MissingCentral(u32),
    #[error("{0} is needed before it has been recovered")]
    Unrecovered(Generator),
}

/// How `Z_n` was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Read off the coefficient of `t^n` in `Z(t)`.
    Extraction,
    /// The closed five-sum formula.
    Direct,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralElement {
    pub n: u32,
    /// In normal form.
    pub as_poly: NCPoly,
    pub route: Route,
}

/// Which of the two substituted series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    S,
    T,
}

/// `a(X)` or `X a(X)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weighting {
    Plain,
    TimesArg,
}

const TV: Var = Var::T;

/// `(q^2 - q^-2)^-2`.
fn c_gg() -> QRat {
    let d = q_diff(2);
    (&d * &d).inv()
}

/// `(-1)^l C(m - l, l) [2]^(-2l)`.
fn alt_coeff(m: usize, l: usize) -> QRat {
    let c = binomial((m - l) as u64, l as u64) * q_int(2).pow(-2 * l as i64);
    if l % 2 == 1 {
        -c
    } else {
        c
    }
}

/// Terms `l >= first` of the down transform at `n`.
fn down_sum<E>(n: usize, first: usize, a: impl Fn(usize) -> Result<NCPoly, E>) -> Result<NCPoly, E> {
    if n == 0 {
        return if first == 0 { a(0) } else { Ok(NCPoly::zero()) };
    }
    let mut out = NCPoly::zero();
    for l in first..=(n - 1) / 2 {
        out.add_scaled(&a(n - 2 * l)?, &alt_coeff(n - 1, l));
    }
    Ok(out)
}

fn ddown_sum<E>(n: usize, a: impl Fn(usize) -> Result<NCPoly, E>) -> Result<NCPoly, E> {
    let mut out = NCPoly::zero();
    for l in 0..=n / 2 {
        out.add_scaled(&a(n - 2 * l)?, &alt_coeff(n, l));
    }
    Ok(out)
}

fn infallible<T>(r: Result<T, Infallible>) -> T {
    r.unwrap_or_else(|e| match e {})
}

/// `a_n` down: `a_0` at `n = 0`, otherwise
/// `sum_l (-1)^l C(n-1-l, l) [2]^(-2l) a_(n-2l)` over `l <= (n-1)/2`.
///
/// Panics if `a` has fewer than `n + 1` entries.
pub fn down_transform(a: &[NCPoly], n: usize) -> NCPoly {
    infallible(down_sum(n, 0, |i| Ok(a[i].clone())))
}

/// `sum_l (-1)^l C(n-l, l) [2]^(-2l) a_(n-2l)` over `l <= n/2`.
pub fn ddown_transform(a: &[NCPoly], n: usize) -> NCPoly {
    infallible(ddown_sum(n, |i| Ok(a[i].clone())))
}

/// Supplies the polynomial standing for a generator.
pub type Lookup<'a> = &'a dyn Fn(Generator) -> Option<NCPoly>;

fn letters(g: Generator) -> Option<NCPoly> {
    Some(NCPoly::letter(g))
}

/// The `i`-th generating-function coefficient of `family`, with generators
/// supplied by `look`. `G_0` and `Gt_0` are always the scalar.
fn family_term(family: Family, i: usize, look: Lookup) -> Result<NCPoly, CentralError> {
    let g = match family {
        Family::G | Family::Gtilde if i == 0 => return Ok(NCPoly::scalar(g0())),
        Family::G => Generator::g(i as u32),
        Family::Gtilde => Generator::gt(i as u32),
        Family::Wminus => Generator::w(-(i as i64)),
        Family::Wplus => Generator::w(i as i64 + 1),
    };
    look(g).ok_or(CentralError::Unrecovered(g))
}

/// The down transform of a generating function's coefficient sequence.
pub fn family_down(family: Family, n: usize) -> NCPoly {
    infallible(down_sum(n, 0, |i| Ok(gf_coeff(family, i as u32))))
}

pub fn family_ddown(family: Family, n: usize) -> NCPoly {
    infallible(ddown_sum(n, |i| Ok(gf_coeff(family, i as u32))))
}

/// `a(S)`, `S a(S)`, `a(T)` or `T a(T)` for the generating function of
/// `family`, to order `order` in `t`.
pub fn subst_st(family: Family, which: Which, weighting: Weighting, order: i32) -> TruncSeries {
    let sign = match which {
        Which::S => -1,
        Which::T => 1,
    };
    let two = q_int(2);
    let cs = (0..=order.max(-1)).map(|m| {
        let c = QRat::q_pow(sign * m as i64) * two.pow(m as i64);
        match weighting {
            Weighting::Plain => family_down(family, m as usize).scale(&c),
            Weighting::TimesArg if m == 0 => NCPoly::zero(),
            Weighting::TimesArg => family_ddown(family, m as usize - 1).scale(&c),
        }
    });
    TruncSeries::from_coeffs(TV, order, cs)
}

/// The scalar series `S` or `T` divided by `t`, to order `order`.
fn st_over_t(which: Which, order: i32) -> TruncSeries {
    let sign = match which {
        Which::S => -1,
        Which::T => 1,
    };
    let two = q_int(2);
    let cs = (0..=order.max(-1)).map(|m| {
        if m % 2 == 1 {
            return NCPoly::zero();
        }
        let l = (m / 2) as i64;
        let c = &two * &QRat::q_pow(sign * (2 * l + 1));
        NCPoly::scalar(if l % 2 == 1 { -c } else { c })
    });
    TruncSeries::from_coeffs(TV, order, cs)
}

fn tpow(e: i32) -> TruncSeries {
    TruncSeries::monomial(&[(TV, e)], QRat::one())
}

/// The substituted generating functions at one order.
struct Parts {
    /// `S W-(S)`, `S W+(S)`, `T W-(T)`, `T W+(T)`.
    wm_s: TruncSeries,
    wp_s: TruncSeries,
    wm_t: TruncSeries,
    wp_t: TruncSeries,
    /// `G(S)`, `Gt(S)`, `G(T)`, `Gt(T)`.
    g_s: TruncSeries,
    gt_s: TruncSeries,
    g_t: TruncSeries,
    gt_t: TruncSeries,
}

impl Parts {
    fn new(order: i32) -> Self {
        use Family::*;
        use Weighting::*;
        use Which::*;
        let f = |fam, w, k| subst_st(fam, w, k, order);
        Parts {
            wm_s: f(Wminus, S, TimesArg),
            wp_s: f(Wplus, S, TimesArg),
            wm_t: f(Wminus, T, TimesArg),
            wp_t: f(Wplus, T, TimesArg),
            g_s: f(G, S, Plain),
            gt_s: f(Gtilde, S, Plain),
            g_t: f(G, T, Plain),
            gt_t: f(Gtilde, T, Plain),
        }
    }
}

type Pair<'a> = (&'a TruncSeries, &'a TruncSeries);

/// `t^-1 AB + t CD - q^2 EF - q^-2 GH + (q^2-q^-2)^-2 XY`.
fn z_shape(ab: Pair, cd: Pair, ef: Pair, gh: Pair, xy: Pair) -> TruncSeries {
    let q2 = QRat::q_pow(2);
    tpow(-1)
        .mul(&ab.0.mul(ab.1))
        .add(&tpow(1).mul(&cd.0.mul(cd.1)))
        .sub(&ef.0.mul(ef.1).scale(&q2))
        .sub(&gh.0.mul(gh.1).scale(&q2.inv()))
        .add(&xy.0.mul(xy.1).scale(&c_gg()))
}

/// Names of the five expressions for `Z(t)`.
pub const Z_FORMS: [&str; 5] = ["defining", "alt1", "alt2", "alt3", "pbw"];

/// The five expressions for `Z(t)` to order `order`, unreduced. The first is
/// the definition; the next three are the alternatives obtained by the GF
/// rules; the last is the PBW-ordered form with the `S - T` quotient.
pub fn z_forms(order: i32) -> Vec<TruncSeries> {
    let m = order + 2;
    let p = Parts::new(m);
    let defining =
        z_shape((&p.wm_s, &p.wp_t), (&p.wp_s, &p.wm_t), (&p.wm_s, &p.wm_t), (&p.wp_s, &p.wp_t), (&p.g_s, &p.gt_t));
    let alt1 =
        z_shape((&p.wp_s, &p.wm_t), (&p.wm_s, &p.wp_t), (&p.wp_s, &p.wp_t), (&p.wm_s, &p.wm_t), (&p.gt_s, &p.g_t));
    let alt2 =
        z_shape((&p.wp_t, &p.wm_s), (&p.wm_t, &p.wp_s), (&p.wm_t, &p.wm_s), (&p.wp_t, &p.wp_s), (&p.g_t, &p.gt_s));
    let alt3 =
        z_shape((&p.wm_t, &p.wp_s), (&p.wp_t, &p.wm_s), (&p.wp_t, &p.wp_s), (&p.wm_t, &p.wm_s), (&p.gt_t, &p.g_s));
    let pbw = z_shape(
        (&p.wm_s, &p.wp_t),
        (&p.wm_t, &p.wp_s),
        (&p.wm_s, &p.wm_t),
        (&p.wp_s, &p.wp_t),
        (&TruncSeries::zero(), &TruncSeries::zero()),
    )
    .add(&pbw_fraction(&p, m));
    [defining, alt1, alt2, alt3, pbw].iter().map(|z| z.truncate(TV, order)).collect()
}

/// `ST (t G(T)Gt(S) - t^-1 G(S)Gt(T)) / ((q^2-q^-2)(q+q^-1)^2 (S - T))`.
fn pbw_fraction(p: &Parts, m: i32) -> TruncSeries {
    let st_t = st_over_t(Which::S, m).mul(&st_over_t(Which::T, m)).mul(&tpow(1));
    let num = st_t.mul(&tpow(2).mul(&p.g_t.mul(&p.gt_s)).sub(&p.g_s.mul(&p.gt_t)));
    let k = q_diff(2) * q_int(2).pow(2);
    let unit = st_over_t(Which::S, m).sub(&st_over_t(Which::T, m)).scale(&k);
    num.exact_divide_unit(TV, &unit).expect("S - T is t times a unit")
}

/// `Z(t)` to order `order`, each coefficient in normal form.
pub fn z_series(order: i32) -> TruncSeries {
    z_forms(order).swap_remove(0).reduce()
}

/// Reads `Z_n` off a reduced `Z(t)` known to order at least `n`.
pub fn extract_z(series: &TruncSeries, n: u32) -> CentralElement {
    let c = series.coeff(&[(TV, n as i32)]).scale(&q_int(2).pow(-(n as i64)));
    CentralElement { n, as_poly: c, route: Route::Extraction }
}

/// The five-sum formula for `Z_n`, or for `Zbar_n` when `bar` is set, with
/// generators supplied by `look`.
fn znform(n: usize, look: Lookup, bar: bool) -> Result<NCPoly, CentralError> {
    use Family::*;
    let wm = |k: usize| ddown_sum(k, |i| family_term(Wminus, i, look));
    let wp = |k: usize| ddown_sum(k, |i| family_term(Wplus, i, look));
    let gd = |k: usize, fam| down_sum(k, 0, |i| family_term(fam, i, look));
    let two = q_int(2);
    let qp = |e: i64| QRat::q_pow(e);
    let ni = n as i64;
    let mut z = NCPoly::zero();
    for k in 0..n {
        let ki = k as i64;
        z.add_scaled(&(&wm(k)? * &wp(n - 1 - k)?), &(&two * &qp(ni - 1 - 2 * ki)));
    }
    for k in 0..n.saturating_sub(2) {
        let ki = k as i64;
        z.add_scaled(&(&wp(n - 3 - k)? * &wm(k)?), &(two.inv() * qp(2 * ki - ni + 3)));
    }
    for k in 0..n.saturating_sub(1) {
        let ki = k as i64;
        z.add_scaled(&(&wm(k)? * &wm(n - 2 - k)?), &-qp(ni - 2 * ki));
        z.add_scaled(&(&wp(k)? * &wp(n - 2 - k)?), &-qp(ni - 2 * ki - 4));
    }
    let ks = if bar { 1..n } else { 0..n + 1 };
    for k in ks {
        let ki = k as i64;
        z.add_scaled(&(&gd(k, G)? * &gd(n - k, Gtilde)?), &(c_gg() * qp(ni - 2 * ki)));
    }
    if bar {
        let d = q_diff(1).inv();
        let tail_g = down_sum(n, 1, |i| family_term(G, i, look))?;
        let tail_gt = down_sum(n, 1, |i| family_term(Gtilde, i, look))?;
        z.add_scaled(&tail_g, &-(qp(-ni) * &d));
        z.add_scaled(&tail_gt, &-(qp(ni) * &d));
    }
    Ok(z)
}

/// `Z_n` by the chosen route, in normal form.
pub fn z_n(n: u32, route: Route) -> CentralElement {
    match route {
        Route::Direct => {
            let p = znform(n as usize, &letters, false).expect("letters are always available");
            CentralElement { n, as_poly: normal_form(&p), route }
        }
        Route::Extraction => extract_z(&z_series(n as i32), n),
    }
}

/// `Zbar_n = Z_n - (q^2-q^-2)^-2 (G_0 Gt_n q^n + G_n Gt_0 q^-n)`, in normal form.
pub fn z_bar(n: u32) -> Result<NCPoly, CentralError> {
    Ok(z_bar_forms(n)?.swap_remove(0))
}

/// Names of the three expressions for `Zbar_n`.
pub const ZBAR_FORMS: [&str; 3] = ["adjusted", "olz", "expanded"];

/// `Zbar_n` three ways, each in normal form: subtracting the `G_0` terms,
/// adding `(G_n q^-n + Gt_n q^n)/(q - q^-1)`, and the expanded formula
/// free of `G_n` and `Gt_n`.
pub fn z_bar_forms(n: u32) -> Result<Vec<NCPoly>, CentralError> {
    if n == 0 {
        return Err(CentralError::BarAtZero);
    }
    let z = z_n(n, Route::Direct).as_poly;
    let ni = n as i64;
    let (gn, gtn) = (NCPoly::letter(Generator::g(n)), NCPoly::letter(Generator::gt(n)));
    let g0c = c_gg() * g0();
    let adjusted = &z - &(&gtn.scale(&(&g0c * &QRat::q_pow(ni))) + &gn.scale(&(&g0c * &QRat::q_pow(-ni))));
    let d = q_diff(1).inv();
    let olz = &z + &(&gn.scale(&(QRat::q_pow(-ni) * &d)) + &gtn.scale(&(QRat::q_pow(ni) * &d)));
    let expanded = znform(n as usize, &letters, true)?;
    Ok([adjusted, olz, expanded].iter().map(normal_form).collect())
}

/// `-2 (q - q^-1) / (q^n + q^-n)`.
pub fn delta_scalar(n: u32) -> QRat {
    QRat::from_int(-2) * q_diff(1) / q_sum(n as i64)
}

/// `Delta_n`, a scalar multiple of `Z_n`.
pub fn delta_n(n: u32) -> Result<NCPoly, CentralError> {
    if n == 0 {
        return Err(CentralError::BarAtZero);
    }
    Ok(z_n(n, Route::Direct).as_poly.scale(&delta_scalar(n)))
}

/// Runs the recursion that rebuilds `G_n, Gt_n, W_-n, W_n+1` for
/// `n = 1..=max_n` from `W_0`, `W_1` and the supplied `Z_n`. Each step uses
/// only generators recovered earlier; `Zbar_n` comes from the expanded
/// formula evaluated on them. Returns the recovered elements in order,
/// starting with `W_0` and `W_1`, each in normal form.
pub fn recover_generators(max_n: u32, z: &[CentralElement]) -> Result<Vec<(Generator, NCPoly)>, CentralError> {
    let mut table: BTreeMap<Generator, NCPoly> = BTreeMap::new();
    let mut seq = Vec::new();
    let mut record = |table: &mut BTreeMap<Generator, NCPoly>, g: Generator, p: NCPoly| {
        table.insert(g, p.clone());
        seq.push((g, p));
    };
    for g in [Generator::w(0), Generator::w(1)] {
        record(&mut table, g, NCPoly::letter(g));
    }
    let two = q_int(2);
    let c = c_gg();
    for n in 1..=max_n {
        let zn = z.iter().find(|e| e.n == n).ok_or(CentralError::MissingCentral(n))?;
        let ni = n as i64;
        let get = |table: &BTreeMap<Generator, NCPoly>, g: Generator| {
            table.get(&g).cloned().ok_or(CentralError::Unrecovered(g))
        };
        let zbar = {
            let look = |g: Generator| table.get(&g).cloned();
            znform(n as usize, &look, true)?
        };
        let w0 = get(&table, Generator::w(0))?;
        let w1 = get(&table, Generator::w(1))?;
        let wn = get(&table, Generator::w(ni))?;
        let comm = w0.commutator(&wn);
        let num = (&zbar - &zn.as_poly).scale(&q_diff(1)) - comm.scale(&(QRat::q_pow(ni) * &two));
        let gn = normal_form(&num.scale(&q_sum(ni).inv()));
        let gtn = normal_form(&(&gn + &comm.scale(&two)));
        let wmn = normal_form(&(&wn - &w0.q_commutator(&gn).scale(&c)));
        record(&mut table, Generator::g(n), gn.clone());
        record(&mut table, Generator::gt(n), gtn);
        record(&mut table, Generator::w(-ni), wmn);
        let w1mn = get(&table, Generator::w(1 - ni))?;
        let wnext = normal_form(&(&w1mn - &gn.q_commutator(&w1).scale(&c)));
        record(&mut table, Generator::w(ni + 1), wnext);
    }
    Ok(seq)
}

/// Recovers generators up to `max_n` from `Z_1..Z_max_n` and compares each
/// with the letter it should equal.
pub fn check_recovery(max_n: u32) -> CheckReport {
    let z: Vec<CentralElement> = (1..=max_n).into_par_iter().map(|n| z_n(n, Route::Direct)).collect();
    let mut rep = CheckReport::new(format!("recover(n<={max_n})"));
    match recover_generators(max_n, &z) {
        Ok(seq) => {
            for (g, p) in seq {
                let ok = p == NCPoly::letter(g);
                let detail = if ok { "exact".to_string() } else { format!("got {p}") };
                rep.push(CaseResult::new(g.to_string(), ok, detail));
            }
        }
        Err(e) => rep.push(CaseResult::new("recursion", false, e.to_string())),
    }
    rep
}

/// Normal form of `[Z_n, g]` for every generator `g` with family index at
/// most `index_bound`. This certifies centrality only up to that bound.
pub fn check_central(n: u32, index_bound: u32) -> CheckReport {
    let z = z_n(n, Route::Direct).as_poly;
    central_cases(n, &z, index_bound)
}

fn central_cases(n: u32, z: &NCPoly, index_bound: u32) -> CheckReport {
    let results = Generator::all_up_to(index_bound)
        .par_iter()
        .map(|g| {
            let c = normal_form(&z.commutator(&NCPoly::letter(*g)));
            let detail = if c.is_zero() { "0".to_string() } else { format!("{} terms", c.len()) };
            CaseResult::new(format!("[Z_{n},{g}]"), c.is_zero(), detail)
        })
        .collect();
    CheckReport { suite: format!("central(n={n},bound={index_bound})"), results }
}

/// Everything asserted about `Z_n` for `n <= max_n`: the value of `Z_0`,
/// agreement of the two routes, fixedness under the two symmetries, the
/// degree bound, and centrality against generators up to `index_bound`.
pub fn check_central_elements(max_n: u32, index_bound: u32) -> CheckReport {
    let series = z_series(max_n as i32);
    let mut rep = CheckReport::new(format!("central(n<={max_n},bound={index_bound})"));
    let per_n: Vec<CheckReport> = (0..=max_n)
        .into_par_iter()
        .map(|n| {
            let mut r = CheckReport::new(format!("Z_{n}"));
            let direct = z_n(n, Route::Direct).as_poly;
            let extracted = extract_z(&series, n).as_poly;
            if n == 0 {
                let two = q_int(2);
                let ok = direct == NCPoly::scalar(&two * &two);
                r.push(CaseResult::new("Z_0=[2]^2", ok, direct.to_string()));
            }
            let agree = direct == extracted;
            r.push(CaseResult::new(format!("Z_{n}:routes"), agree, format!("{} terms", direct.len())));
            let fixed = |img: NCPoly| normal_form(&img) == direct;
            r.push(CaseResult::new(format!("Z_{n}:sigma"), fixed(direct.sigma()), ""));
            r.push(CaseResult::new(format!("Z_{n}:dagger"), fixed(direct.dagger()), ""));
            let deg = direct.max_degree();
            r.push(CaseResult::new(format!("Z_{n}:degree"), deg <= 2 * n as u64, format!("max degree {deg}")));
            r.extend(central_cases(n, &direct, index_bound));
            r
        })
        .collect();
    for r in per_n {
        rep.extend(r);
    }
    rep
}

/// The five expressions of `Z(t)` agree coefficientwise after reduction,
/// and `Z(t)` is fixed by both symmetries.
pub fn check_z_series(order: i32) -> CheckReport {
    let forms: Vec<TruncSeries> = z_forms(order).par_iter().map(TruncSeries::reduce).collect();
    let mut rep = CheckReport::new(format!("z-series(order={order})"));
    let z = &forms[0];
    for (name, f) in Z_FORMS.iter().zip(&forms).skip(1) {
        let d = f.sub(z);
        rep.push(CaseResult::new(format!("Z(t):{name}"), d.is_zero(), diff_detail(&d)));
    }
    let two = q_int(2);
    let c0 = z.coeff(&[(TV, 0)]);
    rep.push(CaseResult::new("Z(t):t^0", c0 == NCPoly::scalar(&two * &two), c0.to_string()));
    rep.push(CaseResult::new("Z(t):sigma", z.sigma().reduce() == *z, ""));
    rep.push(CaseResult::new("Z(t):dagger", z.dagger().reduce() == *z, ""));
    rep
}

fn diff_detail(d: &TruncSeries) -> String {
    match d.terms().next() {
        None => "equal".to_string(),
        Some((e, p)) => format!("differs at {e:?}: {p}"),
    }
}

/// The three expressions of `Zbar_n` agree and contain neither `G_n` nor
/// `Gt_n`, for `1 <= n <= max_n`.
pub fn check_z_bar(max_n: u32) -> CheckReport {
    let mut rep = CheckReport::new(format!("zbar(n<={max_n})"));
    for n in 1..=max_n {
        let forms = z_bar_forms(n).expect("n >= 1");
        for (name, f) in ZBAR_FORMS.iter().zip(&forms).skip(1) {
            rep.push(CaseResult::new(format!("Zbar_{n}:{name}"), *f == forms[0], ""));
        }
        let clean = !forms[0].contains_letter(&Generator::g(n)) && !forms[0].contains_letter(&Generator::gt(n));
        rep.push(CaseResult::new(format!("Zbar_{n}:no-G_{n}"), clean, ""));
    }
    rep
}

/// Entries `(row, col)` of the two 2x2 factors of `Z(t) I`.
fn matrix_factors(order: i32) -> ([TruncSeries; 4], [TruncSeries; 4]) {
    let p = Parts::new(order + 2);
    let q = QRat::q();
    let qi = q.inv();
    let c = q_diff(2).inv();
    let m1 = [
        tpow(1).mul(&p.wp_s).scale(&qi).sub(&p.wm_s.scale(&q)),
        p.g_s.scale(&c),
        p.gt_s.scale(&c),
        tpow(-1).mul(&p.wp_s).scale(&q).sub(&p.wm_s.scale(&qi)),
    ];
    let m2 = [
        p.wm_t.scale(&q).sub(&tpow(-1).mul(&p.wp_t).scale(&qi)),
        p.g_t.scale(&c),
        p.gt_t.scale(&c),
        p.wm_t.scale(&qi).sub(&tpow(1).mul(&p.wp_t).scale(&q)),
    ];
    let trunc = |m: [TruncSeries; 4]| m.map(|e| e.truncate(TV, order + 1));
    (trunc(m1), trunc(m2))
}

fn mat_mul(a: &[TruncSeries; 4], b: &[TruncSeries; 4]) -> [TruncSeries; 4] {
    let e = |i: usize, j: usize| a[2 * i].mul(&b[j]).add(&a[2 * i + 1].mul(&b[2 + j]));
    [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]
}

/// Both products of the two factor matrices equal `Z(t) I` to order `order`.
pub fn check_matrix_factorization(order: i32) -> CheckReport {
    let (m1, m2) = matrix_factors(order);
    let z = z_series(order);
    let mut rep = CheckReport::new(format!("matrix(order={order})"));
    for (label, prod) in [("M1M2", mat_mul(&m1, &m2)), ("M2M1", mat_mul(&m2, &m1))] {
        let reduced: Vec<TruncSeries> = prod.par_iter().map(|e| e.truncate(TV, order).reduce()).collect();
        for (k, e) in reduced.iter().enumerate() {
            let (i, j) = (k / 2 + 1, k % 2 + 1);
            let d = if i == j { e.sub(&z) } else { e.clone() };
            let want = if i == j { "Z(t)" } else { "0" };
            rep.push(CaseResult::new(format!("{label}[{i},{j}]={want}"), d.is_zero(), diff_detail(&d)));
        }
    }
    rep
}

/// The two q-Dolan/Grady relations, as `LHS - RHS`.
pub fn dolan_grady_relations() -> [NCPoly; 2] {
    let w0 = NCPoly::letter(Generator::w(0));
    let w1 = NCPoly::letter(Generator::w(1));
    let d = q_diff(2);
    let k = &d * &d;
    let rel =
        |a: &NCPoly, b: &NCPoly| a.commutator(&a.qq_commutator(&a.q_commutator(b), -1)) - b.commutator(a).scale(&k);
    [rel(&w0, &w1), rel(&w1, &w0)]
}

pub fn check_dolan_grady() -> CheckReport {
    let [first, second] = dolan_grady_relations();
    let mut rep = CheckReport::new("dolan-grady");
    for (name, r) in [("first", &first), ("second", &second)] {
        let nf = normal_form(r);
        let detail = if nf.is_zero() { "0".to_string() } else { format!("residue {nf}") };
        rep.push(CaseResult::new(name, nf.is_zero(), detail));
    }
    rep.push(CaseResult::new("sigma(first)=second", first.sigma() == second, ""));
    rep
}

/// One term of a transform table row: integer coefficient, generator
/// subscript, and power of `[2]_q`.
pub type TableTerm = (i64, i64, i64);

/// `W_-n` double-down, `n = 0..=8`.
pub const TABLE_WM: [&[TableTerm]; 9] = [
    &[(1, 0, 0)],
    &[(1, -1, 0)],
    &[(1, -2, 0), (-1, 0, -2)],
    &[(1, -3, 0), (-2, -1, -2)],
    &[(1, -4, 0), (-3, -2, -2), (1, 0, -4)],
    &[(1, -5, 0), (-4, -3, -2), (3, -1, -4)],
    &[(1, -6, 0), (-5, -4, -2), (6, -2, -4), (-1, 0, -6)],
    &[(1, -7, 0), (-6, -5, -2), (10, -3, -4), (-4, -1, -6)],
    &[(1, -8, 0), (-7, -6, -2), (15, -4, -4), (-10, -2, -6), (1, 0, -8)],
];

/// `W_n+1` double-down, `n = 0..=8`.
pub const TABLE_WP: [&[TableTerm]; 9] = [
    &[(1, 1, 0)],
    &[(1, 2, 0)],
    &[(1, 3, 0), (-1, 1, -2)],
    &[(1, 4, 0), (-2, 2, -2)],
    &[(1, 5, 0), (-3, 3, -2), (1, 1, -4)],
    &[(1, 6, 0), (-4, 4, -2), (3, 2, -4)],
    &[(1, 7, 0), (-5, 5, -2), (6, 3, -4), (-1, 1, -6)],
    &[(1, 8, 0), (-6, 6, -2), (10, 4, -4), (-4, 2, -6)],
    &[(1, 9, 0), (-7, 7, -2), (15, 5, -4), (-10, 3, -6), (1, 1, -8)],
];

/// `G_n` down, `n = 1..=9`. The `Gt` table has the same entries.
pub const TABLE_G: [&[TableTerm]; 9] = [
    &[(1, 1, 0)],
    &[(1, 2, 0)],
    &[(1, 3, 0), (-1, 1, -2)],
    &[(1, 4, 0), (-2, 2, -2)],
    &[(1, 5, 0), (-3, 3, -2), (1, 1, -4)],
    &[(1, 6, 0), (-4, 4, -2), (3, 2, -4)],
    &[(1, 7, 0), (-5, 5, -2), (6, 3, -4), (-1, 1, -6)],
    &[(1, 8, 0), (-6, 6, -2), (10, 4, -4), (-4, 2, -6)],
    &[(1, 9, 0), (-7, 7, -2), (15, 5, -4), (-10, 3, -6), (1, 1, -8)],
];

fn table_poly(row: &[TableTerm], letter: impl Fn(i64) -> Generator) -> NCPoly {
    let mut p = NCPoly::zero();
    for &(c, sub, pow) in row {
        p.add_scaled(&NCPoly::letter(letter(sub)), &(QRat::from_int(c) * q_int(2).pow(pow)));
    }
    p
}

/// The four published tables of transformed generators against the down
/// transforms.
pub fn check_transform_tables() -> CheckReport {
    let mut rep = CheckReport::new("transform-tables");
    let mut row = |name: String, got: NCPoly, want: NCPoly| {
        let ok = got == want;
        let detail = if ok { got.to_string() } else { format!("got {got}, table {want}") };
        rep.push(CaseResult::new(name, ok, detail));
    };
    for (n, r) in TABLE_WM.iter().enumerate() {
        row(format!("Wm(n={n})"), family_ddown(Family::Wminus, n), table_poly(r, Generator::w));
    }
    for (n, r) in TABLE_WP.iter().enumerate() {
        row(format!("Wp(n={n})"), family_ddown(Family::Wplus, n), table_poly(r, Generator::w));
    }
    for (i, r) in TABLE_G.iter().enumerate() {
        let n = i + 1;
        row(format!("G(n={n})"), family_down(Family::G, n), table_poly(r, |k| Generator::g(k as u32)));
        row(format!("Gt(n={n})"), family_down(Family::Gtilde, n), table_poly(r, |k| Generator::gt(k as u32)));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::gf;

    fn l(g: Generator) -> NCPoly {
        NCPoly::letter(g)
    }

    fn two_pow(e: i64) -> QRat {
        q_int(2).pow(e)
    }

    #[test]
    fn down_examples() {
        let g = family_down(Family::G, 3);
        assert_eq!(g, &l(Generator::g(3)) - &l(Generator::g(1)).scale(&two_pow(-2)));
        let seq: Vec<NCPoly> = (0..3).map(|i| gf_coeff(Family::G, i)).collect();
        assert_eq!(down_transform(&seq, 0), NCPoly::scalar(g0()));
        let w = family_ddown(Family::Wminus, 2);
        assert_eq!(w, &l(Generator::w(-2)) - &l(Generator::w(0)).scale(&two_pow(-2)));
        let a: Vec<NCPoly> = vec![l(Generator::w(5))];
        assert_eq!(ddown_transform(&a, 0), l(Generator::w(5)));
    }

    #[test]
    fn transform_tables() {
        let rep = check_transform_tables();
        assert_eq!(rep.len(), 9 + 9 + 18);
        assert!(rep.passed(), "{}", rep.summary());
    }

    /// `S` or `T` by dividing `(q+q^-1) t^2` by `t (q^-+1 + q^+-1 t^2)`.
    fn st_by_division(which: Which, order: i32) -> TruncSeries {
        let (a, b) = match which {
            Which::S => (QRat::q(), QRat::q_pow(-1)),
            Which::T => (QRat::q_pow(-1), QRat::q()),
        };
        let unit = TruncSeries::scalar(a).add(&TruncSeries::monomial(&[(TV, 2)], b));
        TruncSeries::monomial(&[(TV, 2)], q_int(2)).truncate(TV, order + 1).exact_divide_unit(TV, &unit).unwrap()
    }

    #[test]
    fn st_series_match_division() {
        for which in [Which::S, Which::T] {
            let closed = st_over_t(which, 7).mul(&tpow(1)).truncate(TV, 7);
            assert!(closed.sub(&st_by_division(which, 7)).is_zero(), "{which:?}");
        }
    }

    #[test]
    fn subst_matches_composition() {
        let n = 4;
        for fam in Family::ALL {
            for which in [Which::S, Which::T] {
                let inner = st_by_division(which, n);
                let composed = gf(fam, Var::X, n).compose(Var::X, &inner, TV, n).unwrap();
                let plain = subst_st(fam, which, Weighting::Plain, n);
                assert!(plain.sub(&composed).is_zero(), "{fam:?} {which:?} plain\n{plain:?}\n{composed:?}");
                let weighted = inner.mul(&composed).truncate(TV, n);
                let closed = subst_st(fam, which, Weighting::TimesArg, n);
                assert!(closed.sub(&weighted).is_zero(), "{fam:?} {which:?} weighted");
            }
        }
    }

    #[test]
    fn subst_first_coefficients() {
        let s = subst_st(Family::Wminus, Which::S, Weighting::Plain, 1);
        let want = l(Generator::w(-1)).scale(&(QRat::q_pow(-1) * q_int(2)));
        assert_eq!(s.coeff(&[(TV, 1)]), want);
        for fam in Family::ALL {
            let w = subst_st(fam, Which::S, Weighting::TimesArg, 0);
            assert!(w.coeff(&[(TV, 0)]).is_zero());
        }
    }

    #[test]
    fn z0_and_z1() {
        let two = q_int(2);
        assert_eq!(z_n(0, Route::Direct).as_poly, NCPoly::scalar(&two * &two));
        let d = q_diff(1).inv();
        let want = &l(Generator::w(0)) * &l(Generator::w(1)).scale(&two)
            - (&l(Generator::gt(1)).scale(&QRat::q()) + &l(Generator::g(1)).scale(&QRat::q_pow(-1))).scale(&d);
        assert_eq!(z_n(1, Route::Direct).as_poly, normal_form(&want));
    }

    #[test]
    fn routes_agree_small() {
        for n in 0..=2 {
            assert_eq!(z_n(n, Route::Direct).as_poly, z_n(n, Route::Extraction).as_poly, "n={n}");
        }
    }

    #[test]
    fn z_series_forms_small() {
        let rep = check_z_series(3);
        assert!(rep.passed(), "{}", rep.summary());
    }

    #[test]
    fn central_small() {
        assert!(check_central(0, 1).passed());
        let rep = check_central(1, 2);
        assert!(rep.passed(), "{}", rep.summary());
        let z3 = z_n(3, Route::Direct).as_poly;
        assert!(normal_form(&z3.commutator(&l(Generator::gt(4)))).is_zero());
    }

    #[test]
    fn z_bar_small() {
        assert_eq!(z_bar(0), Err(CentralError::BarAtZero));
        let two = q_int(2);
        let w01 = &l(Generator::w(0)) * &l(Generator::w(1));
        assert_eq!(z_bar(1).unwrap(), w01.scale(&two));
        let rep = check_z_bar(3);
        assert!(rep.passed(), "{}", rep.summary());
    }

    #[test]
    fn delta_scalar_even_content() {
        let d = delta_scalar(1);
        assert_eq!(d, QRat::from_int(-2) * q_diff(1) / q_int(2));
        for n in 1..6 {
            let c = delta_scalar(n).numer().content();
            assert!(num_integer::Integer::is_even(&c), "n={n}");
        }
    }

    #[test]
    fn recovery_small() {
        let rep = check_recovery(2);
        assert!(rep.passed(), "{}", rep.summary());
        let names: Vec<&str> = rep.results.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names[..6], ["W[0]", "W[1]", "G[1]", "Gt[1]", "W[-1]", "W[2]"]);
    }

    #[test]
    fn recovery_needs_z() {
        assert_eq!(recover_generators(1, &[]), Err(CentralError::MissingCentral(1)));
    }

    #[test]
    fn matrix_small() {
        let rep = check_matrix_factorization(2);
        assert!(rep.passed(), "{}", rep.summary());
        assert!(check_matrix_factorization(0).passed());
    }

    #[test]
    fn dolan_grady() {
        let rep = check_dolan_grady();
        assert!(rep.passed(), "{}", rep.summary());
    }
}
