//! Named verification suites. Each suite turns one family of identities
//! into a [`SuiteReport`]; defaults are the bounds used by the acceptance
//! run, and every bound can be overridden through [`SuiteConfig`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cartan::CartanDatum;
use crate::coeff::{fmt_rational, Coefficient};
use crate::error::{Error, Result};
use crate::params;
use crate::phi::{verify_cartan_bracket, verify_cartan_bracket_zero, verify_cartan_difference, verify_ef_commutator, verify_shift_kernel};
use crate::qloop::QContext;
use crate::reconstruct::{self, classify, HighestWeight, NodeData, Side};
use crate::relations::families::{ad_family, compare_spans, generating_family, serre_instances, shift_instances, symmetric_family};
use crate::relations::instances::{serre, serre_order};
use crate::relations::{super_commutator, RelContext, Sign};
use crate::report::{Case, SuiteReport};
use crate::roots::{NodeRoots, Root};
use crate::series::{borel, inverse_borel};
use crate::series::{Series, VarSpec, HBAR};
use crate::yangian::{exp_diff_over_v, HNormalization, Mutation, YContext, U_INV, V};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteId {
    /// Series-kernel round trips and the Leibniz rule on random inputs.
    Kernel,
    /// Borel transform of `log(1 − p u⁻¹)`.
    Borel,
    /// Cartan datum invariants and q-number identities.
    Cartan,
    /// General Serre sums against their two-term and commuting forms.
    Serre,
    /// Closed forms of the Cartan-side coefficients on both sides.
    ClosedForms,
    /// `(Φψ_k − Φφ_k)/(q − q⁻¹)` against its two closed forms.
    CartanDifference,
    /// `[Φ(E_r), Φ(F_l)]` in the sl(1,1) evaluation model.
    Commutator,
    /// Borel kernel of `log((u − σ + a)/(u − σ − a))`.
    ShiftKernel,
    /// Images of `[H_{i,r}, E_{j,k}]` and `[H_{i,r}, F_{j,k}]`.
    CartanBracket,
    /// Generating-function forms of the shift and Serre relations as spans.
    GeneratingForms,
    /// Drinfeld polynomial round trips and rejections.
    Reconstruct,
}

impl SuiteId {
    pub const ALL: [SuiteId; 11] = [
        SuiteId::Kernel,
        SuiteId::Borel,
        SuiteId::Cartan,
        SuiteId::Serre,
        SuiteId::ClosedForms,
        SuiteId::CartanDifference,
        SuiteId::Commutator,
        SuiteId::ShiftKernel,
        SuiteId::CartanBracket,
        SuiteId::GeneratingForms,
        SuiteId::Reconstruct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Kernel => "kernel",
            SuiteId::Borel => "borel",
            SuiteId::Cartan => "cartan",
            SuiteId::Serre => "serre",
            SuiteId::ClosedForms => "closed-forms",
            SuiteId::CartanDifference => "cartan-difference",
            SuiteId::Commutator => "commutator",
            SuiteId::ShiftKernel => "shift-kernel",
            SuiteId::CartanBracket => "cartan-bracket",
            SuiteId::GeneratingForms => "generating-forms",
            SuiteId::Reconstruct => "reconstruct",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = Error;
    fn from_str(s: &str) -> Result<SuiteId> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

/// Overrides for a suite run; `None` keeps the suite default.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuiteConfig {
    /// Total truncation order `T`.
    pub order: Option<u32>,
    /// Loop-variable order `U`.
    pub loop_order: Option<u32>,
    /// Shift-module bound `S`.
    pub module_bound: Option<usize>,
    /// Level bound `R`.
    pub level_bound: Option<u32>,
    /// σ-monomial degree bound `D`.
    pub degree_bound: Option<u32>,
    /// Root count `N`.
    pub roots: Option<usize>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub hbar: Option<BigRational>,
    pub seed: u64,
    pub mutation: Option<Mutation>,
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("order", self.order.map(|x| x as usize)),
            ("loop order", self.loop_order.map(|x| x as usize)),
            ("module bound", self.module_bound),
            ("level bound", self.level_bound.map(|x| x as usize)),
            ("degree bound", self.degree_bound.map(|x| x as usize)),
            ("root count", self.roots),
        ];
        for (name, v) in positive {
            if v == Some(0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive")));
            }
        }
        if self.m.is_some() != self.n.is_some() {
            return Err(Error::InvalidArgument("--m and --n go together".into()));
        }
        if let Some(h) = &self.hbar {
            if *h <= BigRational::zero() {
                return Err(Error::InvalidArgument("hbar must be positive".into()));
            }
        }
        Ok(())
    }

    fn data(&self, default: &[(usize, usize)]) -> Vec<CartanDatum> {
        match (self.m, self.n) {
            (Some(m), Some(n)) => vec![CartanDatum::build(m, n)],
            _ => default.iter().map(|&(m, n)| CartanDatum::build(m, n)).collect(),
        }
    }

    fn root_counts(&self, default: &[usize]) -> Vec<usize> {
        self.roots.map_or_else(|| default.to_vec(), |n| vec![n])
    }
}

pub fn run_suite(id: SuiteId, cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let cases = match id {
        SuiteId::Kernel => kernel(cfg)?,
        SuiteId::Borel => borel_suite(cfg)?,
        SuiteId::Cartan => cartan(cfg)?,
        SuiteId::Serre => serre_suite(cfg)?,
        SuiteId::ClosedForms => closed_forms(cfg)?,
        SuiteId::CartanDifference => cartan_difference(cfg)?,
        SuiteId::Commutator => commutator(cfg)?,
        SuiteId::ShiftKernel => shift_kernel(cfg),
        SuiteId::CartanBracket => cartan_bracket(cfg)?,
        SuiteId::GeneratingForms => generating_forms(cfg)?,
        SuiteId::Reconstruct => reconstruct_suite(cfg)?,
    };
    Ok(SuiteReport::new(id.name(), cases))
}

/// Runs `f` on a fresh case; an error becomes a failed case.
fn guarded(params: std::collections::BTreeMap<String, serde_json::Value>, f: impl FnOnce(&mut Case) -> Result<()>) -> Case {
    let mut case = Case::new(params);
    if let Err(e) = f(&mut case) {
        case.fail(format!("error: {e}"));
    }
    case
}

/// A verifier producing several cases; an error becomes one failed case.
fn guarded_many(params: std::collections::BTreeMap<String, serde_json::Value>, r: Result<Vec<Case>>) -> Vec<Case> {
    r.unwrap_or_else(|e| {
        let mut c = Case::new(params);
        c.fail(format!("error: {e}"));
        vec![c]
    })
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn random_rational(rng: &mut ChaCha8Rng, span: i64, max_den: i64) -> BigRational {
    rational(rng.gen_range(-span..=span), rng.gen_range(1..=max_den))
}

/// Random series on every graded monomial of degree in `lo..=hi` over
/// `vars`, each present with probability one half.
fn random_series(rng: &mut ChaCha8Rng, spec: &Arc<VarSpec>, vars: &[&str], lo: u32, hi: u32) -> Result<Series> {
    let mut out = Series::zero(spec);
    let mut exps = vec![0u32; vars.len()];
    loop {
        let deg: u32 = exps.iter().sum();
        if (lo..=hi).contains(&deg) && rng.gen_bool(0.5) {
            let mut term = Series::constant(spec, Coefficient::real(random_rational(rng, 5, 4)));
            for (v, e) in vars.iter().zip(&exps) {
                term = term.mul(&Series::var_pow(spec, v, *e as i32)?)?;
            }
            out = out.add(&term)?;
        }
        // odometer over exponents bounded by `hi`
        let mut k = 0;
        loop {
            if k == exps.len() {
                return Ok(out);
            }
            exps[k] += 1;
            if exps.iter().sum::<u32>() <= hi {
                break;
            }
            exps[k] = 0;
            k += 1;
        }
    }
}

const KERNEL_CASES: usize = 100;

fn kernel(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let t = cfg.order.unwrap_or(6);
    let spec = VarSpec::graded(&["x", "y"], t)?;
    let xy = ["x", "y"];
    let mut out = Vec::new();
    for k in 0..KERNEL_CASES {
        let f = random_series(&mut rng, &spec, &xy, 1, t)?;
        out.push(guarded(params! {"check" => "exp-log", "case" => k}, |c| {
            c.compare(&f.exp()?.log()?, &f);
            let one_plus = Series::one(&spec).add(&f)?;
            c.compare(&one_plus.log()?.exp()?, &one_plus);
            Ok(())
        }));
    }
    for k in 0..KERNEL_CASES {
        let f = random_series(&mut rng, &spec, &xy, 1, t)?;
        let mut r = random_rational(&mut rng, 4, 3);
        if r.is_zero() {
            r = BigRational::one();
        }
        out.push(guarded(params! {"check" => "sqrt", "case" => k}, |c| {
            let s = Series::constant(&spec, Coefficient::real(&r * &r)).add(&f)?;
            let root = s.sqrt()?;
            c.compare(&root.mul(&root)?, &s);
            Ok(())
        }));
    }
    for k in 0..KERNEL_CASES {
        let f = random_series(&mut rng, &spec, &xy, 0, t)?;
        let g = random_series(&mut rng, &spec, &xy, 0, t)?;
        out.push(guarded(params! {"check" => "leibniz", "case" => k}, |c| {
            // differentiation loses the top degree
            let keep = t as i32 - 1;
            let lhs = f.mul(&g)?.derivative("x")?.truncate_degree(keep);
            let rhs = f.derivative("x")?.mul(&g)?.add(&f.mul(&g.derivative("x")?)?)?.truncate_degree(keep);
            c.compare(&lhs, &rhs);
            Ok(())
        }));
    }
    let u = cfg.loop_order.unwrap_or(6);
    let src = VarSpec::graded(&["x"], t)?.with_loop(U_INV, u)?;
    let target = VarSpec::graded(&["x", V], t + u)?;
    for k in 0..KERNEL_CASES {
        let f = random_series(&mut rng, &src, &["x", U_INV], 0, t + u)?;
        let f = f.sub(&Series::from_loop_coeffs(&src, &[(0, f.loop_coeff(0)?)])?)?;
        out.push(guarded(params! {"check" => "borel-inverse", "case" => k}, |c| {
            let b = borel(&f, &target, V)?;
            c.compare(&inverse_borel(&b, &src, V)?, &f);
            Ok(())
        }));
    }
    Ok(out)
}

fn borel_suite(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    // v-degree bound; the term p^k v^{k−1} has total degree 2k − 1
    let vd = cfg.order.unwrap_or(12);
    let src = VarSpec::graded(&["p"], vd + 1)?.with_loop(U_INV, vd + 1)?;
    let target = VarSpec::graded(&["p", V], 2 * vd + 1)?;
    let mut out = Vec::new();
    out.push(guarded(params! {"p" => "formal", "v_degree" => vd}, |c| {
        let pw = Series::var(&src, "p")?.mul(&Series::var(&src, U_INV)?)?;
        let lhs = borel(&Series::one(&src).sub(&pw)?.log()?, &target, V)?;
        let rhs = exp_diff_over_v(&target, &Series::var(&target, "p")?)?.neg();
        c.compare(&lhs, &rhs);
        Ok(())
    }));
    for p in [rational(1, 2), rational(-3, 1), rational(2, 3)] {
        let src = VarSpec::graded(&[], 0)?.with_loop(U_INV, vd + 1)?;
        let target = VarSpec::graded(&[V], vd)?;
        out.push(guarded(params! {"p" => fmt_rational(&p), "v_degree" => vd}, |c| {
            let pw = Series::var(&src, U_INV)?.scale(&Coefficient::real(p.clone()));
            let lhs = borel(&Series::one(&src).sub(&pw)?.log()?, &target, V)?;
            let rhs = exp_diff_over_v(&target, &Series::from_rational(&target, p.clone()))?.neg();
            c.compare(&lhs, &rhs);
            Ok(())
        }));
    }
    Ok(out)
}

fn cartan(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let data = cfg.data(&[(0, 0), (0, 1), (1, 0), (1, 1), (2, 1), (1, 2), (2, 3)]);
    let spec = VarSpec::graded(&[HBAR], cfg.order.unwrap_or(8))?;
    let mut out = Vec::new();
    for d in data {
        out.push(guarded(params! {"m" => d.m, "n" => d.n, "check" => "datum"}, |c| {
            for i in d.nodes() {
                if d.d(i).abs() != 1 || d.parity(i) != u8::from(i == d.odd_node()) {
                    c.fail(format!("symmetrizer or parity wrong at node {i}"));
                }
                if (d.b(i, i) == 0) != (i == d.odd_node()) {
                    c.fail(format!("diagonal of node {i}"));
                }
                for j in d.nodes() {
                    if d.d(i) * d.a(i, j) != d.b(i, j) || d.b(i, j) != d.b(j, i) {
                        c.fail(format!("symmetrization fails at ({i},{j})"));
                    }
                    if i != j && d.a(i, j) > 0 && d.a_tilde(i, j) >= 0 {
                        c.fail(format!("ã at ({i},{j})"));
                    }
                }
            }
            Ok(())
        }));
        for i in d.nodes() {
            out.push(guarded(params! {"m" => d.m, "n" => d.n, "check" => "q-numbers", "i" => i}, |c| {
                let q = d.q_series(i, &spec)?;
                let qinv = d.q_pow(i, -1, &spec)?;
                c.compare(&d.q_number(2, i, &spec)?, &q.add(&qinv)?);
                for n in 1..=4i64 {
                    c.compare(&d.q_number(-n, i, &spec)?, &d.q_number(n, i, &spec)?.neg());
                    for k in 1..n {
                        let lhs = d.q_binomial(n, k, i, &spec)?;
                        c.compare(&lhs, &d.q_binomial(n, n - k, i, &spec)?);
                        let pascal = d
                            .q_pow(i, k, &spec)?
                            .mul(&d.q_binomial(n - 1, k, i, &spec)?)?
                            .add(&d.q_pow(i, -(n - k), &spec)?.mul(&d.q_binomial(n - 1, k - 1, i, &spec)?)?)?;
                        c.compare(&lhs, &pascal);
                    }
                }
                Ok(())
            }));
        }
    }
    Ok(out)
}

fn serre_suite(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let top = cfg.level_bound.unwrap_or(3) as i32;
    let mut out = Vec::new();
    for d in cfg.data(&[(1, 1), (2, 1), (0, 2)]) {
        let ctx = RelContext::new(d, top as u32, 2)?;
        for i in d.nodes() {
            for j in d.nodes().filter(|&j| j != i) {
                for sign in Sign::both() {
                    let p = params! {"m" => d.m, "n" => d.n, "i" => i, "j" => j, "sign" => sign.to_string()};
                    out.push(guarded(p, |c| {
                        let x = |node, k| ctx.gen(sign, node, k);
                        let br = super_commutator;
                        let order = serre_order(&ctx, i, j);
                        for l in 0..=top {
                            for k in 0..=top {
                                if order == 1 {
                                    let got = serre(&ctx, sign, i, j, &[k], l)?;
                                    c.compare_elem(&got, &br(&x(i, k)?, &x(j, l)?)?);
                                    continue;
                                }
                                for s in 0..=top {
                                    let got = serre(&ctx, sign, i, j, &[k, s], l)?;
                                    let want = br(&x(i, k)?, &br(&x(i, s)?, &x(j, l)?)?)?
                                        .add(&br(&x(i, s)?, &br(&x(i, k)?, &x(j, l)?)?)?)?;
                                    c.compare_elem(&got, &want);
                                }
                            }
                        }
                        c.note(format!("order {order}, levels ≤ {top}"));
                        Ok(())
                    }));
                }
            }
        }
    }
    Ok(out)
}

/// Seeded distinct rationals, avoiding zero when `nonzero`.
fn distinct_rationals(rng: &mut ChaCha8Rng, count: usize, nonzero: bool) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::new();
    while out.len() < count {
        let x = random_rational(rng, 9, 5);
        if (nonzero && x.is_zero()) || out.contains(&x) {
            continue;
        }
        out.push(x);
    }
    out
}

fn closed_forms(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let t = cfg.order.unwrap_or(8);
    let top = 4u32;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut setups: Vec<(String, usize, NodeRoots, NodeRoots)> = Vec::new();
    for n in cfg.root_counts(&[1, 2]) {
        let y = NodeRoots::formal(1, n, "");
        // loop-side roots need a nonzero constant for the expansion at 0
        let q = NodeRoots::new(
            1,
            (0..n).map(|p| Root::shifted(2 * p as i64 + 1, &format!("A{}", p + 1))).collect(),
            (0..n).map(|p| Root::shifted(2 * p as i64 + 2, &format!("B{}", p + 1))).collect(),
        )?;
        setups.push(("formal".into(), n, y, q));
    }
    if cfg.roots.is_none() {
        for s in 0..5 {
            let r = distinct_rationals(&mut rng, 6, true);
            let rr = |xs: &[BigRational]| xs.iter().cloned().map(Root::rational).collect::<Vec<_>>();
            let y = NodeRoots::new(1, rr(&r[..3]), rr(&r[3..]))?;
            let q = NodeRoots::new(1, rr(&r[..3]), rr(&r[3..]))?;
            setups.push((format!("random-{s}"), 3, y, q));
        }
    }
    let mut out = Vec::new();
    for (mode, n, y, q) in setups {
        let p = |f: &str| params! {"mode" => mode.clone(), "N" => n, "formula" => f};
        let datum = CartanDatum::build(0, 0);
        let yc = YContext::new(datum, vec![y.clone()], t, t, HNormalization::HbarScaled);
        let qc = QContext::new(datum, vec![q.clone()], t, t);
        let (yc, qc) = match (yc, qc) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                let mut c = Case::new(p("setup"));
                c.fail(format!("error: {e}"));
                out.push(c);
                continue;
            }
        };
        let keep = t as i32 - 1;
        out.push(guarded(p("psi"), |c| {
            let psi = qc.psi(1)?;
            for r in 0..top {
                c.compare_cleared(&psi.loop_coeff(r + 1)?, &qc.du_psi(1, r)?, t as i32)?;
            }
            Ok(())
        }));
        out.push(guarded(p("phi"), |c| {
            let phi = qc.phi(1)?;
            for r in 1..=top {
                let mut lhs = phi.loop_coeff(r - 1)?;
                if r == 1 {
                    lhs = lhs.sub(&Series::one(&qc.spec))?;
                }
                c.compare_cleared(&lhs, &qc.du_phi(1, r)?, t as i32)?;
            }
            Ok(())
        }));
        out.push(guarded(p("log-psi"), |c| {
            let lg = qc.psi(1)?.log()?;
            for k in 1..=top {
                c.compare(&lg.loop_coeff(k)?, &qc.du_h(1, k)?);
            }
            Ok(())
        }));
        out.push(guarded(p("h"), |c| {
            for r in 0..top {
                c.compare_cleared(&yc.h_coeff(1, r)?, &yc.dy_h(1, r)?, keep)?;
            }
            Ok(())
        }));
        out.push(guarded(p("t"), |c| {
            for r in 0..top {
                c.compare(&yc.t_coeff(1, r)?.truncate_degree(keep), &yc.dy_t(1, r)?.truncate_degree(keep));
            }
            Ok(())
        }));
        out.push(guarded(p("borel-t"), |c| {
            c.compare(&yc.borel_t(1)?.truncate_degree(keep), &yc.borel_t_closed(1)?.truncate_degree(keep));
            Ok(())
        }));
    }
    Ok(out)
}

fn cartan_difference(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let t = cfg.order.unwrap_or(13);
    let ks: Vec<i64> = (-2..=2).collect();
    let mut out = Vec::new();
    for n in cfg.root_counts(&[1, 2]) {
        let run = YContext::sl11_formal(n, t, cfg.loop_order.unwrap_or(t))
            .map(|c| c.with_mutation(cfg.mutation))
            .and_then(|ctx| verify_cartan_difference(&ctx, &ks));
        out.extend(guarded_many(params! {"N" => n}, run));
    }
    Ok(out)
}

fn commutator(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let t = cfg.order.unwrap_or(13);
    let bound = cfg.module_bound.unwrap_or(t as usize);
    let rs: Vec<i64> = (-2..=2).collect();
    let mut out = Vec::new();
    for n in cfg.root_counts(&[1, 2]) {
        let run = YContext::sl11_formal(n, t, cfg.loop_order.unwrap_or(t))
            .map(|c| c.with_mutation(cfg.mutation))
            .and_then(|ctx| verify_ef_commutator(&ctx, &rs, &rs, bound));
        out.extend(guarded_many(params! {"N" => n}, run));
    }
    Ok(out)
}

fn shift_kernel(cfg: &SuiteConfig) -> Vec<Case> {
    let order = cfg.order.unwrap_or(21);
    guarded_many(params! {"order" => order}, verify_shift_kernel(order))
}

fn cartan_bracket(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let bound = cfg.module_bound.unwrap_or(8);
    let order = cfg.order.unwrap_or(10);
    let mut out = Vec::new();
    for d in cfg.data(&[(1, 1), (2, 1)]) {
        for i in d.nodes() {
            for j in d.nodes() {
                for k in 0..=1 {
                    let p = params! {"m" => d.m, "n" => d.n, "i" => i, "j" => j, "r" => 0, "k" => k};
                    out.push(verify_cartan_bracket_zero(&d, i, j, k, bound, order).unwrap_or_else(|e| {
                        let mut c = Case::new(p);
                        c.fail(format!("error: {e}"));
                        c
                    }));
                    for r in 1..=3 {
                        let p = params! {"m" => d.m, "n" => d.n, "i" => i, "j" => j, "r" => r, "k" => k};
                        out.push(verify_cartan_bracket(&d, i, j, r, k, bound, order).unwrap_or_else(|e| {
                            let mut c = Case::new(p);
                            c.fail(format!("error: {e}"));
                            c
                        }));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn span_case(case: &mut Case, a: Result<Vec<crate::relations::AlgElem>>, b: Result<Vec<crate::relations::AlgElem>>, want_equal: bool) -> Result<()> {
    let (a, b) = (a?, b?);
    let cmp = compare_spans(&a, &b);
    let ok = if want_equal { cmp.equal() } else { cmp.b_in_a };
    case.note(format!(
        "ranks {}/{}/{} (instances/generating/union), {} vs {} elements",
        cmp.rank_a,
        cmp.rank_b,
        cmp.rank_union,
        a.len(),
        b.len()
    ));
    if !ok {
        let w = cmp.witness.map(|w| format!("{} #{}: {}", w.family, w.index, w.element)).unwrap_or_default();
        case.fail(format!("spans differ; witness {w}"));
    }
    Ok(())
}

fn generating_forms(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let r = cfg.level_bound.unwrap_or(4);
    let deg = cfg.degree_bound.unwrap_or(3);
    if deg + 1 > r {
        return Err(Error::InvalidArgument(format!("degree bound {deg} needs level bound ≥ {}", deg + 1)));
    }
    let mut out = Vec::new();
    for d in cfg.data(&[(1, 1)]) {
        let ctx = RelContext::new(d, r, 2)?;
        for sign in Sign::both() {
            for i in d.nodes() {
                for j in d.nodes() {
                    let p = |item: &str| {
                        params! {"m" => d.m, "n" => d.n, "item" => item, "i" => i, "j" => j, "sign" => sign.to_string()}
                    };
                    if i != j {
                        if i == d.m && j == d.m + 1 {
                            continue;
                        }
                        out.push(guarded(p("shift"), |c| {
                            span_case(c, shift_instances(&ctx, sign, i, j, deg), generating_family(&ctx, sign, i, j, deg), true)
                        }));
                        let n = serre_order(&ctx, i, j);
                        // Serre levels: sum ≤ deg keeps every level ≤ R
                        out.push(guarded(p("serre"), |c| {
                            span_case(c, serre_instances(&ctx, sign, i, j, 0, deg), ad_family(&ctx, sign, i, j, 0, n, deg), true)
                        }));
                    } else if d.parity(i) == 0 {
                        out.push(guarded(p("symmetric"), |c| {
                            span_case(c, shift_instances(&ctx, sign, i, i, deg), symmetric_family(&ctx, sign, i, deg), true)
                        }));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Monic polynomial with the given roots, ascending coefficients.
fn monic(roots: &[BigRational]) -> Vec<BigRational> {
    reconstruct::from_roots(roots)
}

fn strings(xs: &[BigRational]) -> Vec<String> {
    xs.iter().map(fmt_rational).collect()
}

const ROUND_TRIPS: usize = 50;
const NEGATIVES: usize = 10;

fn reconstruct_suite(cfg: &SuiteConfig) -> Result<Vec<Case>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max_deg = cfg.degree_bound.unwrap_or(4) as usize;
    let known = 2 * max_deg + 4;
    let hbar = cfg.hbar.clone().unwrap_or_else(BigRational::one);
    let q = rational(2, 1);
    let data = cfg.data(&[(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)]);
    let mut out = Vec::new();
    for case in 0..ROUND_TRIPS {
        let d = data[case % data.len()];
        let side = if case % 2 == 0 { Side::Yangian } else { Side::Qloop };
        let mut nodes = Vec::new();
        let mut expect = Vec::new();
        for i in d.nodes() {
            let deg = rng.gen_range(0..=max_deg);
            let odd = i == d.odd_node();
            let roots = distinct_rationals(&mut rng, if odd { 2 * deg } else { deg }, side == Side::Qloop);
            let p = monic(&roots[..deg]);
            let (coeffs, minus, qpoly) = match (side, odd) {
                (Side::Yangian, true) => {
                    let qp = monic(&roots[deg..]);
                    let c = reconstruct::expand_at_infinity(&p, &qp, known + 1)?;
                    (c[1..].iter().map(|x| x / &hbar).collect::<Vec<_>>(), None, Some(qp))
                }
                (Side::Yangian, false) => {
                    let s = rational(d.b(i, i), 2) * &hbar;
                    let c = reconstruct::additive_series(&p, &s, known + 1)?;
                    (c[1..].iter().map(|x| x / &hbar).collect(), None, None)
                }
                (Side::Qloop, true) => {
                    let qp = monic(&roots[deg..]);
                    let scalar = distinct_rationals(&mut rng, 1, true).remove(0);
                    let plus = reconstruct::expand_at_infinity(&p, &qp, known)?;
                    let minus = reconstruct::expand_at_zero(&p, &qp, known)?;
                    let sc = |v: Vec<BigRational>| v.into_iter().map(|x| x * &scalar).collect::<Vec<_>>();
                    (sc(plus), Some(sc(minus)), Some(qp))
                }
                (Side::Qloop, false) => {
                    let s = q.pow(d.b(i, i) as i32);
                    let scalar = distinct_rationals(&mut rng, 1, true).remove(0);
                    let (plus, minus) = reconstruct::multiplicative_series(&p, &s, &scalar, known)?;
                    (plus, Some(minus), None)
                }
            };
            nodes.push(NodeData {
                i,
                coeffs: strings(&coeffs),
                coeffs_minus: minus.as_deref().map(strings),
            });
            expect.push((i, strings(&p), qpoly.as_deref().map(strings)));
        }
        let hw = HighestWeight {
            side,
            hbar: Some(fmt_rational(&hbar)),
            q: Some(fmt_rational(&q)),
            m: Some(d.m),
            n: Some(d.n),
            max_deg: Some(max_deg),
            nodes,
        };
        let p = params! {"kind" => "round-trip", "case" => case, "side" => format!("{side:?}").to_lowercase(), "m" => d.m, "n" => d.n};
        out.push(guarded(p, |c| {
            let res = classify(&hw, None)?;
            if !res.finite_dimensional {
                c.fail(format!("rejected: {:?}", res.rejected));
                return Ok(());
            }
            for ((i, pp, qp), got) in expect.iter().zip(&res.polys) {
                if got.i != *i || &got.p != pp || &got.q != qp {
                    c.fail(format!("node {i}: expected P={pp:?} Q={qp:?}, got P={:?} Q={:?}", got.p, got.q));
                }
            }
            Ok(())
        }));
    }
    for case in 0..NEGATIVES {
        let d = data[case % data.len()];
        let side = if case % 2 == 0 { Side::Yangian } else { Side::Qloop };
        // exp(c/u)-type coefficients c^k/k! are not rational of any degree
        let c0 = distinct_rationals(&mut rng, 1, true).remove(0);
        let mut fact = BigInt::one();
        let mut coeffs = Vec::new();
        for k in 1..=known as i64 {
            fact *= BigInt::from(k);
            coeffs.push(c0.pow(k as i32) / BigRational::from_integer(fact.clone()));
        }
        let target = d.nodes().nth(case % d.size()).unwrap_or(1);
        let nodes = d
            .nodes()
            .map(|i| {
                let c: Vec<BigRational> = if i == target {
                    match side {
                        Side::Yangian => coeffs.clone(),
                        Side::Qloop => std::iter::once(BigRational::one()).chain(coeffs.iter().cloned()).collect(),
                    }
                } else {
                    match side {
                        Side::Yangian => vec![BigRational::zero(); known],
                        Side::Qloop => {
                            let s = q.pow(d.b(i, i) as i32);
                            reconstruct::multiplicative_series(&[BigRational::one()], &s, &BigRational::one(), known).map(|x| x.0).unwrap_or_default()
                        }
                    }
                };
                NodeData {
                    i,
                    coeffs: strings(&c),
                    coeffs_minus: None,
                }
            })
            .collect();
        let hw = HighestWeight {
            side,
            hbar: Some(fmt_rational(&hbar)),
            q: Some(fmt_rational(&q)),
            m: Some(d.m),
            n: Some(d.n),
            max_deg: Some(max_deg),
            nodes,
        };
        let p = params! {"kind" => "negative", "case" => case, "side" => format!("{side:?}").to_lowercase(), "node" => target};
        out.push(guarded(p, |c| {
            let res = classify(&hw, None)?;
            match res.rejected.iter().find(|r| r.i == target) {
                Some(r) if !res.finite_dimensional && r.certificate.is_some() => {
                    c.note(format!("{}: {}", r.reason, serde_json::to_string(&r.certificate).unwrap_or_default()));
                }
                _ => c.fail("not rejected with a certificate"),
            }
            if res.rejected.iter().any(|r| r.i != target) {
                c.fail("a regular node was rejected");
            }
            Ok(())
        }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for id in SuiteId::ALL {
            assert_eq!(id.name().parse::<SuiteId>().unwrap(), id);
        }
        assert!("nope".parse::<SuiteId>().is_err());
    }

    #[test]
    fn config_validation() {
        let bad = SuiteConfig {
            order: Some(0),
            ..Default::default()
        };
        assert!(run_suite(SuiteId::Borel, &bad).is_err());
        let lone = SuiteConfig {
            m: Some(1),
            ..Default::default()
        };
        assert!(lone.validate().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let cfg = SuiteConfig {
            order: Some(5),
            ..Default::default()
        };
        for id in [SuiteId::Borel, SuiteId::Cartan] {
            let r = run_suite(id, &cfg).unwrap();
            assert!(r.pass(), "{}", r.to_text());
        }
    }

    #[test]
    fn random_series_is_seeded() {
        let spec = VarSpec::graded(&["x", "y"], 3).unwrap();
        let a = random_series(&mut ChaCha8Rng::seed_from_u64(3), &spec, &["x", "y"], 1, 3).unwrap();
        let b = random_series(&mut ChaCha8Rng::seed_from_u64(3), &spec, &["x", "y"], 1, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.constant_term().is_zero());
    }
}
