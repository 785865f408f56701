//! Property sweeps over every identity the library relies on. Each suite is a
//! list of independent cases; cases run on a bounded rayon pool and results
//! are aggregated in a fixed order, so reports do not depend on scheduling.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{binomial, chi, chi_via_shift, cohomology_character, dimension, CharacterTable};
use crate::index::{
    a_polys, b_poly, b_poly_alt, half_series, half_series_formula, max_j, sum_recurrence_sides, Half,
    IndexSeriesReport,
};
use crate::laurent::{elementary_symmetric, lambda_poly, LaurentPoly};
use crate::lefschetz::{
    euler_characteristic, lefschetz_residue, random_poly, sweep_representatives, KClassRep, NumericCheck,
};
use crate::series::{geometric_expansion, is_unit_series, j0, j_delta, j_inf, module_action};
use crate::series::{ExpansionPoint, Window};

/// Deliberate defects used to check that the harness notices failures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Negates `B_{n,k}^0` before it enters the main-theorem comparison.
    FlipBSign,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyConfig {
    /// Upper bound applied to every suite's `n` range.
    pub n_max: Option<usize>,
    /// Intersected with every suite's `k` range.
    pub k_range: Option<(i64, i64)>,
    pub seed: u64,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    pub fault: Option<Fault>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub id: String,
    pub range: String,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
    pub exit_status: i32,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.exit_status == 0
    }

    pub fn total_cases(&self) -> usize {
        self.suites.iter().map(|s| s.cases).sum()
    }

    pub fn suite(&self, id: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.id == id)
    }
}

type Outcome = std::result::Result<(), String>;

struct Case {
    label: String,
    check: Box<dyn Fn() -> Outcome + Send + Sync>,
}

fn case(label: String, check: impl Fn() -> Outcome + Send + Sync + 'static) -> Case {
    Case { label, check: Box::new(check) }
}

struct Suite {
    id: &'static str,
    range: String,
    cases: Vec<Case>,
}

/// Identifiers of all suites, in report order.
pub const SUITE_IDS: &[&str] = &[
    "chi-closed-form-vs-shift",
    "chi-invariants",
    "euler-decomposition",
    "dimension-formula",
    "shift-relation-1",
    "shift-relation-2",
    "shift-relation-3",
    "shift-relation-4",
    "vanishing-lemma",
    "series-truncation-soundness",
    "series-unit-laws",
    "series-annihilation",
    "series-support",
    "main-theorem",
    "a-equals-b",
    "b-form-equivalence",
    "b-recurrence",
    "sum-recurrence",
    "one-sided-halves",
    "lefschetz-equivalence",
    "ideal-invariance",
    "numeric-agreement",
    "residue-polynomiality",
];

/// Random class representatives per `n` in the Lefschetz suites.
pub const RANDOM_REPS: usize = 50;
/// Numeric points per class representative.
pub const NUMERIC_POINTS: u64 = 20;
/// Half-width of the main-theorem comparison window.
pub const MAIN_WINDOW: i64 = 10;

fn ns(cfg: &VerifyConfig, lo: usize, hi: usize) -> RangeInclusive<usize> {
    lo..=cfg.n_max.map_or(hi, |m| hi.min(m))
}

fn ks(cfg: &VerifyConfig, lo: i64, hi: i64) -> RangeInclusive<i64> {
    match cfg.k_range {
        Some((a, b)) => lo.max(a)..=hi.min(b),
        None => lo..=hi,
    }
}

fn fmt_range<T: std::fmt::Display>(name: &str, r: &RangeInclusive<T>) -> String {
    format!("{name}={}..{}", r.start(), r.end())
}

fn expect_eq(what: &str, left: &LaurentPoly, right: &LaurentPoly) -> Outcome {
    if left == right {
        Ok(())
    } else {
        Err(format!("{what}: {left} != {right}"))
    }
}

fn err(e: crate::error::Error) -> String {
    e.to_string()
}

fn build(id: &str, cfg: &VerifyConfig) -> Suite {
    let cfg = cfg.clone();
    let mut cases = Vec::new();
    let range;
    match id {
        "chi-closed-form-vs-shift" => {
            let (n_r, l_r) = (ns(&cfg, 1, 4), -15..=15i64);
            range = format!("{}, {}", fmt_range("n", &n_r), fmt_range("l", &l_r));
            for n in n_r {
                for l in l_r.clone() {
                    cases.push(case(format!("n={n} l={l}"), move || {
                        expect_eq("closed form vs shift", &chi(n, l), &chi_via_shift(n, l).map_err(err)?)
                    }));
                }
            }
        }
        "chi-invariants" => {
            let (n_r, l_r) = (ns(&cfg, 0, 4), -15..=15i64);
            range = format!("{}, {}", fmt_range("n", &n_r), fmt_range("l", &l_r));
            for n in n_r {
                for l in l_r.clone() {
                    cases.push(case(format!("n={n} l={l}"), move || {
                        let c = chi(n, l);
                        expect_eq("memo vs uncached", &c, &CharacterTable::uncached().chi(n, l))?;
                        if l == 0 && !c.is_one() {
                            return Err(format!("chi_{{{n},0}} = {c}"));
                        }
                        if -(n as i64) - 1 < l && l < 0 && !c.is_zero() {
                            return Err(format!("chi_{{{n},{l}}} = {c}, expected 0"));
                        }
                        Ok(())
                    }));
                }
            }
        }
        "euler-decomposition" => {
            let (n_r, l_r) = (ns(&cfg, 1, 3), -10..=10i64);
            range = format!("{}, {}", fmt_range("n", &n_r), fmt_range("l", &l_r));
            for n in n_r {
                for l in l_r.clone() {
                    cases.push(case(format!("n={n} l={l}"), move || {
                        let mut sum = LaurentPoly::zero(n + 1);
                        for q in 0..=n {
                            let h = cohomology_character(n, q, l).map_err(err)?;
                            sum = if q % 2 == 0 { &sum + &h } else { &sum - &h };
                        }
                        expect_eq("alternating cohomology sum", &chi(n, l), &sum)
                    }));
                }
            }
        }
        "dimension-formula" => {
            let (n_r, l_r) = (ns(&cfg, 1, 5), -20..=20i64);
            range = format!("{}, {}", fmt_range("n", &n_r), fmt_range("l", &l_r));
            for n in n_r {
                for l in l_r.clone() {
                    cases.push(case(format!("n={n} l={l}"), move || {
                        let ni = n as i64;
                        let expect = if l >= 0 {
                            binomial(l + ni, ni)
                        } else if l <= -ni - 1 {
                            let b = binomial(-l - 1, ni);
                            if n % 2 == 0 {
                                b
                            } else {
                                -b
                            }
                        } else {
                            BigInt::from(0)
                        };
                        let got = chi(n, l).at_identity();
                        if got != expect {
                            return Err(format!("chi at identity {got}, expected {expect}"));
                        }
                        let mut alt = BigInt::from(0);
                        for q in 0..=n {
                            let d = dimension(n, q, l).map_err(err)?;
                            alt = if q % 2 == 0 { alt + d } else { alt - d };
                        }
                        if alt != expect {
                            return Err(format!("alternating dimension sum {alt}, expected {expect}"));
                        }
                        Ok(())
                    }));
                }
            }
        }
        "shift-relation-1" | "shift-relation-2" | "shift-relation-3" | "shift-relation-4" => {
            let which = id.as_bytes()[id.len() - 1] - b'0';
            let n_r = ns(&cfg, 1, 4);
            let l_r = match which {
                3 => 0..=12i64,
                4 => -12..=-2i64,
                _ => -12..=12i64,
            };
            let j_r = if which == 2 { 1..=5i64 } else { 1..=1 };
            range = if which == 2 {
                format!("{}, {}, {}", fmt_range("n", &n_r), fmt_range("l", &l_r), fmt_range("j", &j_r))
            } else {
                format!("{}, {}", fmt_range("n", &n_r), fmt_range("l", &l_r))
            };
            for n in n_r {
                for l in l_r.clone() {
                    for j in j_r.clone() {
                        let label =
                            if which == 2 { format!("n={n} l={l} j={j}") } else { format!("n={n} l={l}") };
                        cases.push(case(label, move || shift_relation(which, n, l, j)));
                    }
                }
            }
        }
        "vanishing-lemma" => {
            let (n_r, k_r, j_r) = (ns(&cfg, 0, 3), ks(&cfg, -3, 3), -6..=6i64);
            range = format!("{}, {}, {}", fmt_range("n", &n_r), fmt_range("k", &k_r), fmt_range("j", &j_r));
            for n in n_r {
                for k in k_r.clone() {
                    for j in j_r.clone() {
                        cases.push(case(format!("n={n} k={k} j={j}"), move || {
                            let mut sum = LaurentPoly::zero(n + 1);
                            for i in 0..=n + 1 {
                                let term = &chi(n, i as i64 * k + j) * &elementary_symmetric(n + 1, i, k);
                                sum = if i % 2 == 0 { &sum + &term } else { &sum - &term };
                            }
                            expect_eq("alternating sum", &sum, &LaurentPoly::zero(n + 1))
                        }));
                    }
                }
            }
        }
        "series-truncation-soundness" | "series-unit-laws" | "series-annihilation" | "series-support" => {
            let (n_r, k_r) = (ns(&cfg, 0, 3), ks(&cfg, -3, 3));
            range = format!("{}, {}, default windows", fmt_range("n", &n_r), fmt_range("k", &k_r));
            let id = id.to_string();
            for n in n_r {
                for k in k_r.clone() {
                    let id = id.clone();
                    cases.push(case(format!("n={n} k={k}"), move || series_law(&id, n, k)));
                }
            }
        }
        "main-theorem" => {
            let (n_r, k_r) = (ns(&cfg, 1, 3), ks(&cfg, -3, 3));
            let win = Window::symmetric(MAIN_WINDOW);
            range = format!("{}, {}, m={win}", fmt_range("n", &n_r), fmt_range("k", &k_r));
            let fault = cfg.fault;
            for n in n_r {
                for k in k_r.clone() {
                    cases.push(case(format!("n={n} k={k}"), move || {
                        let mut b = b_poly(n, k, 0).map_err(err)?;
                        if fault == Some(Fault::FlipBSign) {
                            b = -b;
                        }
                        let r = IndexSeriesReport::from_b(&b, n, k, win).map_err(err)?;
                        match r.first_mismatch {
                            None => Ok(()),
                            Some(m) => Err(format!("first_mismatch m={m}")),
                        }
                    }));
                }
            }
            cases.push(case("delta".to_string(), move || {
                let one = LaurentPoly::one(1);
                let z = geometric_expansion(&one, win, ExpansionPoint::Zero).map_err(err)?;
                let i = geometric_expansion(&one, win, ExpansionPoint::Infinity).map_err(err)?;
                let d = z.try_sub(&i).map_err(err)?;
                let e = j_delta(0, 1, win).map(LaurentPoly::at_torus_identity);
                if d.coeffs().iter().chain(e.coeffs()).all(LaurentPoly::is_one) {
                    Ok(())
                } else {
                    Err("delta expansion has a coefficient other than 1".to_string())
                }
            }));
        }
        "a-equals-b" => {
            let (n_r, k_r) = (ns(&cfg, 0, 3), ks(&cfg, -4, -1));
            range = format!("{}, {}, all j", fmt_range("n", &n_r), fmt_range("k", &k_r));
            for n in n_r {
                for k in k_r.clone() {
                    cases.push(case(format!("n={n} k={k}"), move || {
                        let a = a_polys(n, k).map_err(err)?;
                        for (j, aj) in a.iter().enumerate() {
                            expect_eq(&format!("j={j}"), aj, &b_poly(n, k, j as i64).map_err(err)?)?;
                        }
                        Ok(())
                    }));
                }
            }
        }
        "b-form-equivalence" => {
            let (n_r, k_r) = (ns(&cfg, 0, 3), ks(&cfg, -3, 3));
            range = format!("{}, {}, all j", fmt_range("n", &n_r), fmt_range("k", &k_r));
            for n in n_r {
                for k in k_r.clone() {
                    for j in 0..=max_j(k) {
                        cases.push(case(format!("n={n} k={k} j={j}"), move || {
                            expect_eq(
                                "two forms",
                                &b_poly(n, k, j).map_err(err)?,
                                &b_poly_alt(n, k, j).map_err(err)?,
                            )
                        }));
                    }
                }
            }
        }
        "b-recurrence" => {
            let (n_r, k_r) = (ns(&cfg, 1, 3), ks(&cfg, -4, -2));
            range = format!("{}, {}, all j", fmt_range("n", &n_r), fmt_range("k", &k_r));
            for n in n_r {
                for k in k_r.clone() {
                    for j in 0..=max_j(k) {
                        cases.push(case(format!("n={n} k={k} j={j}"), move || b_recurrence(n, k, j)));
                    }
                }
            }
        }
        "sum-recurrence" => {
            let (n_r, k_r) = (ns(&cfg, 1, 3), ks(&cfg, -3, -1));
            range = format!("{}, {}, |m|<={MAIN_WINDOW}", fmt_range("n", &n_r), fmt_range("k", &k_r));
            for n in n_r {
                for k in k_r.clone() {
                    for half in [Half::NonNeg, Half::Neg] {
                        cases.push(case(format!("n={n} k={k} {half:?}"), move || {
                            let [lhs, a, b, c] = sum_recurrence_sides(n, k, half, MAIN_WINDOW).map_err(err)?;
                            for (form, rhs) in [(1, a), (2, b), (3, c)] {
                                if let Some(m) = lhs.first_mismatch(&rhs).map_err(err)? {
                                    return Err(format!("form {form} differs at m={m}"));
                                }
                            }
                            Ok(())
                        }));
                    }
                }
            }
        }
        "one-sided-halves" => {
            let (n_r, k_r) = (ns(&cfg, 0, 3), ks(&cfg, -3, 3));
            let win = Window::symmetric(MAIN_WINDOW);
            range = format!("{}, {}, all j, m={win}", fmt_range("n", &n_r), fmt_range("k", &k_r));
            for n in n_r {
                for k in k_r.clone() {
                    for j in 0..=max_j(k) {
                        for half in [Half::NonNeg, Half::Neg] {
                            cases.push(case(format!("n={n} k={k} j={j} {half:?}"), move || {
                                let lhs = half_series(n, k, j, half, win).map_err(err)?;
                                let rhs = half_series_formula(n, k, j, half, win).map_err(err)?;
                                match lhs.first_mismatch(&rhs).map_err(err)? {
                                    None => Ok(()),
                                    Some(m) => Err(format!("first_mismatch m={m}")),
                                }
                            }));
                        }
                    }
                }
            }
        }
        "lefschetz-equivalence" | "numeric-agreement" => {
            let n_r = ns(&cfg, 1, 3);
            range = if id == "numeric-agreement" {
                format!("{}, {NUMERIC_POINTS} points per representative", fmt_range("n", &n_r))
            } else {
                format!("{}, t^-6..t^6, lambda(-1), {RANDOM_REPS} random", fmt_range("n", &n_r))
            };
            let numeric = id == "numeric-agreement";
            for n in n_r {
                for (label, f) in sweep_representatives(n, RANDOM_REPS, cfg.seed) {
                    let seed = cfg.seed;
                    cases.push(case(format!("n={n} f={label}"), move || {
                        let exact = lefschetz_residue(n, &f).map_err(err)?;
                        if !numeric {
                            return expect_eq("residue vs Euler", &exact, &euler_characteristic(n, &f).map_err(err)?);
                        }
                        for p in 0..NUMERIC_POINTS {
                            let s = seed.wrapping_mul(1_000_003).wrapping_add(p);
                            let c = NumericCheck::compute(n, &f, &exact, s).map_err(err)?;
                            if !c.passes() {
                                return Err(format!("point seed {s}: abs_err {:e}", c.abs_err));
                            }
                        }
                        Ok(())
                    }));
                }
            }
        }
        "ideal-invariance" | "residue-polynomiality" => {
            let n_r = ns(&cfg, 1, 3);
            range = format!("{}, {RANDOM_REPS} random per n", fmt_range("n", &n_r));
            let ideal = id == "ideal-invariance";
            for n in n_r {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(if ideal { 17 } else { 29 }) ^ n as u64);
                for i in 0..RANDOM_REPS {
                    let f = if ideal { random_poly(n, 4, 3, &mut rng) } else { random_poly(n, 6, 5, &mut rng) };
                    let q = random_poly(n, 3, 2, &mut rng);
                    cases.push(case(format!("n={n} #{i}"), move || {
                        let f = KClassRep::new(f.clone());
                        let r = lefschetz_residue(n, &f).map_err(|e| format!("f={}: {e}", f.poly()))?;
                        if ideal {
                            let g = f.add_ideal_element(&q).map_err(err)?;
                            expect_eq("after adding ideal element", &r, &lefschetz_residue(n, &g).map_err(err)?)
                        } else {
                            Ok(())
                        }
                    }));
                }
            }
        }
        other => panic!("unknown suite {other}"),
    }
    Suite { id: SUITE_IDS.iter().find(|s| **s == id).expect("known id"), range, cases }
}

fn shift_relation(which: u8, n: usize, l: i64, j: i64) -> Outcome {
    let rank = n + 1;
    let lower = |l: i64| chi(n - 1, l).embed(rank);
    let tv = |p: i64| LaurentPoly::torus_var(rank, rank, p);
    let rhs = match which {
        1 => &lower(l) + &(&chi(n, l - 1) * &tv(-1)),
        2 => {
            let mut acc = &chi(n, l - j) * &tv(-j);
            for i in 0..j {
                acc = &acc + &(&lower(l - i) * &tv(-i));
            }
            acc
        }
        3 => (0..=l).fold(LaurentPoly::zero(rank), |acc, i| &acc + &(&lower(l - i) * &tv(-i))),
        _ => -(1..=(-l - 1)).fold(LaurentPoly::zero(rank), |acc, i| &acc + &(&lower(l + i) * &tv(i))),
    };
    expect_eq(&format!("relation {which}"), &chi(n, l), &rhs)
}

fn series_law(id: &str, n: usize, k: i64) -> Outcome {
    let win = Window::default_for(n, k);
    let lambda = lambda_poly(n, k);
    match id {
        "series-truncation-soundness" => {
            let big = Window::symmetric(2 * win.hi);
            let pairs = [
                ("j0", j0(n, k, win), j0(n, k, big)),
                ("j_inf", j_inf(n, k, win), j_inf(n, k, big)),
                ("j_delta", j_delta(n, k, win), j_delta(n, k, big)),
                (
                    "lambda*j_delta",
                    module_action(&lambda, &j_delta(n, k, win)).map_err(err)?,
                    module_action(&lambda, &j_delta(n, k, big)).map_err(err)?,
                ),
            ];
            for (name, small, large) in pairs {
                if let Some(m) = small.first_mismatch(&large).map_err(err)? {
                    return Err(format!("{name} differs at m={m}"));
                }
            }
            Ok(())
        }
        "series-unit-laws" => {
            for (name, s) in [("j0", j0(n, k, win)), ("j_inf", j_inf(n, k, win))] {
                let p = module_action(&lambda, &s).map_err(err)?;
                if !is_unit_series(&p) {
                    return Err(format!("lambda*{name} is not 1 on {}", p.window()));
                }
            }
            Ok(())
        }
        "series-annihilation" => {
            let p = module_action(&lambda, &j_delta(n, k, win)).map_err(err)?;
            let bad = p.iter().find(|(_, c)| !c.is_zero()).map(|(m, c)| format!("lambda*J has {c} at m={m}"));
            bad.map_or(Ok(()), Err)
        }
        _ => {
            let low = j0(n, k, win);
            if let Some((m, _)) = low.iter().find(|(m, c)| *m < 0 && !c.is_zero()) {
                return Err(format!("j0 nonzero at m={m}"));
            }
            let high = j_inf(n, k, win);
            let top = -(n as i64) - 1;
            if let Some((m, _)) = high.iter().find(|(m, c)| *m > top && !c.is_zero()) {
                return Err(format!("j_inf nonzero at m={m}"));
            }
            Ok(())
        }
    }
}

fn b_recurrence(n: usize, k: i64, j: i64) -> Outcome {
    let rank = n + 1;
    let b = |lev: usize, j: i64| b_poly(lev, k, j).map_err(err);
    let t = LaurentPoly::circle_var(rank, 1);
    let rhs = if j == 0 {
        let mut acc = b(n - 1, 0)?.embed(rank);
        for i in 1..=max_j(k) {
            let factor = &LaurentPoly::torus_var(rank, rank, k + i) * &t;
            acc = &acc + &(&b(n - 1, i)?.embed(rank) * &factor);
        }
        acc
    } else {
        let damp = &LaurentPoly::one(rank) - &(&LaurentPoly::torus_var(rank, rank, k) * &t);
        &(&damp * &b(n - 1, j)?.embed(rank)) + &(&LaurentPoly::torus_var(rank, rank, -1) * &b(n, j - 1)?)
    };
    expect_eq(if j == 0 { "B0 recurrence" } else { "Bj recurrence" }, &b(n, j)?, &rhs)
}

fn run_suites(ids: &[&str], cfg: &VerifyConfig) -> Vec<SuiteResult> {
    let suites: Vec<Suite> = ids.iter().map(|id| build(id, cfg)).collect();
    let flat: Vec<(usize, usize, &Case)> = suites
        .iter()
        .enumerate()
        .flat_map(|(s, suite)| suite.cases.iter().enumerate().map(move |(c, case)| (s, c, case)))
        .collect();
    let run = || -> Vec<(usize, usize, Outcome)> {
        flat.par_iter()
            .map(|(s, c, case)| {
                let out = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| (case.check)()))
                    .unwrap_or_else(|_| Err("panicked".to_string()));
                (*s, *c, out)
            })
            .collect()
    };
    let mut outcomes = if cfg.jobs == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build().expect("thread pool").install(run)
    };
    outcomes.sort_by_key(|(s, c, _)| (*s, *c));
    suites
        .iter()
        .enumerate()
        .map(|(s, suite)| {
            let mine: Vec<_> = outcomes.iter().filter(|(si, _, _)| *si == s).collect();
            let failed: Vec<_> = mine.iter().filter(|(_, _, o)| o.is_err()).collect();
            SuiteResult {
                id: suite.id.to_string(),
                range: suite.range.clone(),
                cases: mine.len(),
                failures: failed.len(),
                first_failure: failed.first().map(|(_, c, o)| {
                    format!("{}: {}", suite.cases[*c].label, o.as_ref().expect_err("failed case"))
                }),
            }
        })
        .collect()
}

/// Runs one suite by id.
pub fn run_suite(id: &str, cfg: &VerifyConfig) -> Option<SuiteResult> {
    run_selected(&[id], cfg).ok()?.suites.pop()
}

/// Runs the named suites, in the given order. Unknown ids are returned as
/// the error.
pub fn run_selected(ids: &[&str], cfg: &VerifyConfig) -> std::result::Result<VerifyReport, String> {
    if let Some(bad) = ids.iter().find(|id| !SUITE_IDS.contains(id)) {
        return Err((*bad).to_string());
    }
    Ok(report(run_suites(ids, cfg), cfg.seed))
}

fn report(suites: Vec<SuiteResult>, seed: u64) -> VerifyReport {
    let failed = suites.iter().any(|s| s.failures > 0);
    VerifyReport { seed, suites, exit_status: i32::from(failed) }
}

/// Runs every suite in [`SUITE_IDS`].
pub fn run_all(cfg: &VerifyConfig) -> VerifyReport {
    report(run_suites(SUITE_IDS, cfg), cfg.seed)
}
