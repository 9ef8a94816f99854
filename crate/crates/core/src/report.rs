//! Batch verification over `(q, k, s)` grids and deterministic report output.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::characters::{check_k0_identities, check_positivity_law, CharacterData};
use crate::curve_cohomology::{
    build_diagram, embedding_rank, nonsplit_checks, verify_diagram, CheckItem, DrForm,
};
use crate::error::{Error, Result};
use crate::field_tower::{build_tower_bounded, prime_power, Fe, FieldTower, FIELD_BOUND};
use crate::gmodule::{Group, Level};
use crate::hasse_alpha::{
    act_on_p1, alpha_coefficient_map, alpha_composite, build_transversal, coset_to_p1,
    induced_decomposition,
};
use crate::serre_maps::{
    cuspidal_quotient, identity_checks, ker_d_graded, omega_map, periodicity_iso, short_exact,
    t_origin, tau_map, theta_bar_row, vartheta_map, OmegaOutcome, KER_D_DEGREE_BOUND,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Alpha,
    Characters,
    Diagram,
    Fields,
    Nonsplit,
    Serre,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Fields,
        Suite::Serre,
        Suite::Characters,
        Suite::Diagram,
        Suite::Nonsplit,
        Suite::Alpha,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Alpha => "alpha",
            Suite::Characters => "characters",
            Suite::Diagram => "diagram",
            Suite::Fields => "fields",
            Suite::Nonsplit => "nonsplit",
            Suite::Serre => "serre",
        }
    }

    pub fn parse(s: &str) -> Result<Vec<Suite>> {
        match s {
            "all" => Ok(Suite::ALL.to_vec()),
            _ => Suite::ALL
                .into_iter()
                .find(|x| x.name() == s)
                .map(|x| vec![x])
                .ok_or_else(|| Error::Config(format!("unknown suite {s}"))),
        }
    }
}

/// `All` means every valid weight for the suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KRange {
    All,
    Range(i64, i64),
}

impl KRange {
    /// `all`, `k`, or inclusive `a..b`.
    pub fn parse(s: &str) -> Result<KRange> {
        let bad = || Error::Config(format!("bad k range {s}"));
        if s == "all" {
            return Ok(KRange::All);
        }
        if let Some((a, b)) = s.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            );
            if a > b {
                return Err(bad());
            }
            return Ok(KRange::Range(a, b));
        }
        let k = s.trim().parse().map_err(|_| bad())?;
        Ok(KRange::Range(k, k))
    }

    fn pick(&self, default: std::ops::RangeInclusive<i64>) -> Vec<i64> {
        match *self {
            KRange::All => default.collect(),
            KRange::Range(a, b) => (a..=b).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub qs: Vec<u64>,
    pub k: KRange,
    /// Integers reduced into the prime field; empty means `{1, 2}`.
    pub s: Vec<i64>,
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub max_q: u64,
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            qs: vec![3, 5, 7, 9],
            k: KRange::All,
            s: Vec::new(),
            suites: Suite::ALL.to_vec(),
            seed: 0,
            max_q: FIELD_BOUND,
            timings: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Params {
    pub q: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub s: Vec<i64>,
    /// Further integer parameters, e.g. `("n", 5)`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<(String, i64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub name: String,
    pub anchor: String,
    pub params: Params,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerDescriptor {
    pub p: u32,
    pub n: u32,
    pub q: u32,
    /// Defining polynomial of `F_{q^2}` over `F_p`, low degree first.
    pub modulus: Vec<u32>,
    pub g: Vec<u32>,
    pub eps: Vec<u32>,
}

impl TowerDescriptor {
    pub fn of(t: &FieldTower) -> TowerDescriptor {
        TowerDescriptor {
            p: t.p(),
            n: t.n(),
            q: t.q(),
            modulus: t.modulus().to_vec(),
            g: t.render(t.gen()),
            eps: t.render(t.eps()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub version: String,
    pub tower: Vec<TowerDescriptor>,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.failures() == 0 {
            0
        } else {
            1
        }
    }
}

/// Builds the tower for `q`, rejecting non prime powers and `q` above the bound.
pub fn tower_for(q: u64, max_q: u64) -> Result<FieldTower> {
    let (p, n) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    build_tower_bounded(p, n, max_q)
}

/// Records of one `(suite, q)` unit.
struct Unit<'a> {
    suite: Suite,
    t: &'a FieldTower,
    cfg: &'a SuiteConfig,
    out: Vec<CheckRecord>,
}

impl Unit<'_> {
    fn params(&self, k: Option<i64>, s: &[i64], extra: &[(&str, i64)]) -> Params {
        Params {
            q: self.t.q() as u64,
            k,
            s: s.to_vec(),
            extra: extra.iter().map(|(n, v)| (n.to_string(), *v)).collect(),
        }
    }

    fn push(
        &mut self,
        name: &str,
        anchor: &str,
        params: Params,
        status: Status,
        detail: Option<String>,
        ms: Option<f64>,
    ) {
        self.out.push(CheckRecord {
            suite: self.suite,
            name: name.into(),
            anchor: anchor.into(),
            params,
            status,
            detail,
            wall_ms: ms.filter(|_| self.cfg.timings),
        });
    }

    /// Runs `f`; an error becomes a failing record carrying the message.
    fn check(
        &mut self,
        name: &str,
        anchor: &str,
        params: Params,
        f: impl FnOnce() -> Result<(bool, Option<String>)>,
    ) {
        let start = Instant::now();
        let (status, detail) = match f() {
            Ok((true, d)) => (Status::Pass, d),
            Ok((false, d)) => (Status::Fail, d),
            Err(e) => (Status::Fail, Some(e.to_string())),
        };
        let ms = start.elapsed().as_secs_f64() * 1e3;
        self.push(name, anchor, params, status, detail, Some(ms));
    }

    fn skip(&mut self, name: &str, anchor: &str, params: Params, reason: &str) {
        self.push(
            name,
            anchor,
            params,
            Status::Skipped,
            Some(reason.into()),
            None,
        );
    }
}

fn summarize(items: &[CheckItem]) -> (bool, Option<String>) {
    let failed: Vec<String> = items
        .iter()
        .filter(|i| !i.passed)
        .map(|i| match &i.detail {
            Some(d) => format!("{}: {d}", i.name),
            None => i.name.clone(),
        })
        .collect();
    if failed.is_empty() {
        (true, Some(format!("{} items", items.len())))
    } else {
        (false, Some(failed.join("; ")))
    }
}

fn scalars(t: &FieldTower, s: &[i64]) -> Result<Vec<Fe>> {
    s.iter()
        .map(|&x| {
            let v = t.from_int(x);
            if v.is_zero() {
                Err(Error::Config(format!("s = {x} vanishes mod {}", t.p())))
            } else {
                Ok(v)
            }
        })
        .collect()
}

fn fields_suite(u: &mut Unit) {
    let t = u.t;
    let q = t.q() as i64;
    let seed = u.cfg.seed;
    u.check(
        "generator_order",
        "field-tower",
        u.params(None, &[], &[]),
        || {
            let o = t.mult_order(t.gen())?;
            Ok((o == t.order(), Some(format!("order {o}"))))
        },
    );
    u.check(
        "eps_in_base",
        "field-tower",
        u.params(None, &[], &[]),
        || {
            Ok((
                t.in_base(t.eps()) && t.mult_order(t.eps())? == t.q() - 1,
                None,
            ))
        },
    );
    if t.p() == 2 {
        u.skip(
            "quadratic_embedding",
            "quadratic-embedding",
            u.params(None, &[], &[]),
            "p = 2",
        );
    } else {
        u.check(
            "quadratic_embedding",
            "quadratic-embedding",
            u.params(None, &[], &[]),
            || {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let units: Vec<Fe> = t.all_units().collect();
                let pairs: Vec<(Fe, Fe)> = if q <= 9 {
                    units
                        .iter()
                        .flat_map(|&a| units.iter().map(move |&b| (a, b)))
                        .collect()
                } else {
                    (0..500)
                        .map(|_| {
                            (
                                units[rng.random_range(0..units.len())],
                                units[rng.random_range(0..units.len())],
                            )
                        })
                        .collect()
                };
                let mat = |c: Fe| t.iota(c);
                let mul = |x: [[Fe; 2]; 2], y: [[Fe; 2]; 2]| {
                    let e = |i: usize, j: usize| {
                        t.add(t.mul(x[i][0], y[0][j]), t.mul(x[i][1], y[1][j]))
                    };
                    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
                };
                for (a, b) in pairs {
                    if mat(t.mul(a, b))? != mul(mat(a)?, mat(b)?) {
                        return Ok((
                            false,
                            Some(format!("iota not multiplicative at ({}, {})", a.0, b.0)),
                        ));
                    }
                }
                for c in units {
                    let m = mat(c)?;
                    let det = t.sub(t.mul(m[0][0], m[1][1]), t.mul(m[0][1], m[1][0]));
                    if det != t.norm(c) {
                        return Ok((false, Some(format!("det iota({}) is not the norm", c.0))));
                    }
                }
                Ok((true, None))
            },
        );
    }
    u.check(
        "teichmuller_multiplicative",
        "teichmuller-lift",
        u.params(None, &[], &[]),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let units: Vec<Fe> = t.all_units().collect();
            for _ in 0..40 {
                let a = units[rng.random_range(0..units.len())];
                let b = units[rng.random_range(0..units.len())];
                let lhs = t.teichmuller(t.mul(a, b))?;
                let rhs = t.cyclo().mul(&t.teichmuller(a)?, &t.teichmuller(b)?);
                if lhs != rhs {
                    return Ok((false, Some(format!("at ({}, {})", a.0, b.0))));
                }
            }
            Ok((true, None))
        },
    );
}

fn cuspidal_weights(t: &FieldTower, cfg: &SuiteConfig) -> Vec<i64> {
    cfg.k.pick(2..=t.p() as i64 - 1)
}

fn in_cuspidal_range(t: &FieldTower, k: i64) -> bool {
    (2..t.p() as i64).contains(&k)
}

fn serre_suite(u: &mut Unit) {
    let t = u.t;
    let q = t.q() as i64;
    let p = t.p() as i64;
    u.check(
        "dickson_sum_identity",
        "dickson-sum-identity",
        u.params(None, &[], &[]),
        || {
            let r = identity_checks(t);
            Ok((
                r.polynomial_identity && r.power_sums,
                (!r.failures.is_empty()).then(|| r.failures.join("; ")),
            ))
        },
    );
    u.check(
        "kernel_of_derivation",
        "kernel-of-derivation",
        u.params(None, &[], &[]),
        || {
            for m in 0..=KER_D_DEGREE_BOUND {
                let (nullity, count) = ker_d_graded(t, m)?;
                if nullity != count {
                    return Ok((
                        false,
                        Some(format!("degree {m}: nullity {nullity}, count {count}")),
                    ));
                }
            }
            Ok((true, Some(format!("degrees 0..={KER_D_DEGREE_BOUND}"))))
        },
    );
    u.check(
        "steinberg_map",
        "steinberg-map",
        u.params(None, &[], &[]),
        || {
            let v = vartheta_map(t)?;
            v.check(Group::GL2)?;
            let ker = v.kernel();
            let constants = ker.len() == 1 && {
                let c = ker[0][0];
                !c.is_zero() && ker[0].iter().all(|&x| x == c)
            };
            Ok((v.is_surjective() && constants, None))
        },
    );
    u.check(
        "evaluation_delta",
        "evaluation-delta",
        u.params(Some(q + 2), &[], &[]),
        || {
            let tau = tau_map(t, q + 2)?;
            tau.check(Group::GL2)?;
            let img = tau.matrix.apply(&t_origin(t, (q + 2) as usize).c, t);
            Ok((
                !img[0].is_zero() && img[1..].iter().all(|x| x.is_zero()),
                None,
            ))
        },
    );
    for lambda in [1, 2] {
        u.check(
            "periodicity",
            "periodicity",
            u.params(Some(q + 2), &[], &[("lambda", lambda)]),
            || Ok((periodicity_iso(t, q + 2, lambda)?.is_some(), None)),
        );
    }
    if p == 2 {
        return;
    }
    for k in cuspidal_weights(t, u.cfg) {
        if !in_cuspidal_range(t, k) {
            u.skip(
                "cuspidal_dimension",
                "cuspidal-quotient",
                u.params(Some(k), &[], &[]),
                "k outside 2..p-1",
            );
            continue;
        }
        u.check(
            "cuspidal_dimension",
            "cuspidal-quotient",
            u.params(Some(k), &[], &[]),
            || {
                let d = cuspidal_quotient(t, k as usize, Level::Base, 0)?
                    .module()
                    .dim();
                Ok((d as i64 == q - 1, Some(format!("dim {d}"))))
            },
        );
        u.check(
            "weight_lowering",
            "weight-lowering",
            u.params(Some(k), &[], &[]),
            || match omega_map(t, k as usize, Fe::ONE, Level::Base)? {
                OmegaOutcome::Map(w) => {
                    w.check(Group::GL2)?;
                    let row = theta_bar_row(t, k as usize, Level::Base, 1, 0)?;
                    let ex = short_exact(&row.theta_bar, &w);
                    Ok((q == p && ex.holds(), Some("explicit map".into())))
                }
                OmegaOutcome::Impossible(c) => Ok((
                    q > p,
                    Some(format!(
                        "binom({}, {}) = {} = 0 mod {}",
                        c.n, c.r, c.binomial, c.p
                    )),
                )),
            },
        );
    }
}

fn characters_suite(u: &mut Unit, data: &Result<CharacterData>) {
    let data = match data {
        Ok(d) => d,
        Err(e) => {
            let msg = e.to_string();
            u.check(
                "character_data",
                "brauer-inventory",
                u.params(None, &[], &[]),
                || Err(Error::Config(msg)),
            );
            return;
        }
    };
    let ks = u.cfg.k.pick(-10..=30);
    let recs = check_k0_identities(&data.ctx, ks.iter().copied());
    match recs {
        Err(e) => {
            let msg = e.to_string();
            u.check(
                "k0_identities",
                "k0-periodicity",
                u.params(None, &[], &[]),
                || Err(Error::Internal(msg)),
            );
        }
        Ok(recs) => {
            for r in recs {
                u.check(
                    "k0_periodicity",
                    "k0-periodicity",
                    u.params(Some(r.k), &[], &[]),
                    || Ok((r.periodicity, None)),
                );
                match r.cuspidal_difference {
                    Some(ok) => u.check(
                        "cuspidal_difference",
                        "cuspidal-character",
                        u.params(Some(r.k), &[], &[]),
                        || Ok((ok, None)),
                    ),
                    None => u.skip(
                        "cuspidal_difference",
                        "cuspidal-character",
                        u.params(Some(r.k), &[], &[]),
                        "k = 0 mod q+1",
                    ),
                }
                if let Some(ok) = r.quotient_character {
                    u.check(
                        "quotient_character",
                        "cuspidal-character",
                        u.params(Some(r.k), &[], &[]),
                        || Ok((ok, None)),
                    );
                }
            }
        }
    }
    let ks = u.cfg.k.pick(-2..=20);
    match check_positivity_law(&data.ctx, &data.inventory, ks) {
        Ok(recs) => {
            for r in recs {
                u.check(
                    "positivity_law",
                    "positivity-law",
                    u.params(Some(r.k), &[], &[]),
                    || {
                        Ok((
                            r.positive == r.expected,
                            Some(format!(
                                "positive = {}, expected = {}",
                                r.positive, r.expected
                            )),
                        ))
                    },
                );
            }
        }
        Err(e) => {
            let msg = e.to_string();
            u.check(
                "positivity_law",
                "positivity-law",
                u.params(None, &[], &[]),
                || Err(Error::Internal(msg)),
            );
        }
    }
}

fn diagram_suite(u: &mut Unit, data: Option<&CharacterData>) {
    let t = u.t;
    let s = if u.cfg.s.is_empty() {
        vec![1, 2]
    } else {
        u.cfg.s.clone()
    };
    let seed = u.cfg.seed;
    for k in cuspidal_weights(t, u.cfg) {
        if !in_cuspidal_range(t, k) {
            u.skip(
                "comparison_diagram",
                "comparison-diagram",
                u.params(Some(k), &s, &[]),
                "k outside 2..p-1",
            );
            continue;
        }
        u.check(
            "comparison_diagram",
            "comparison-diagram",
            u.params(Some(k), &s, &[]),
            || {
                let sv = scalars(t, &s)?;
                Ok(summarize(&verify_diagram(t, k, &sv, seed, data)?))
            },
        );
    }
}

fn nonsplit_suite(u: &mut Unit) {
    let t = u.t;
    for k in cuspidal_weights(t, u.cfg) {
        if !in_cuspidal_range(t, k) {
            u.skip(
                "nonsplit",
                "nonsplit-bottom-row",
                u.params(Some(k), &[], &[]),
                "k outside 2..p-1",
            );
            continue;
        }
        u.check(
            "nonsplit",
            "nonsplit-bottom-row",
            u.params(Some(k), &[], &[]),
            || Ok(summarize(&nonsplit_checks(t, k)?)),
        );
    }
    if t.n() == 1 && t.p() > 3 {
        u.check(
            "no_embedding",
            "no-embedding",
            u.params(None, &[], &[]),
            || {
                let (r, need) = embedding_rank(t)?;
                Ok((
                    r < need,
                    Some(format!("max rank {r}, embedding needs {need}")),
                ))
            },
        );
    } else {
        u.skip(
            "no_embedding",
            "no-embedding",
            u.params(None, &[], &[]),
            "needs q = p > 3",
        );
    }
}

fn alpha_suite(u: &mut Unit) {
    let t = u.t;
    let p = t.p() as i64;
    if t.n() != 1 || p <= 3 {
        u.skip(
            "transversal",
            "transversal",
            u.params(None, &[], &[]),
            "needs q = p > 3",
        );
        return;
    }
    for n in [5, 11] {
        if n % p == 0 {
            u.skip(
                "transversal",
                "transversal",
                u.params(None, &[], &[("n", n)]),
                "p divides N",
            );
            continue;
        }
        u.check(
            "transversal",
            "transversal",
            u.params(None, &[], &[("n", n)]),
            || {
                let tr = build_transversal(n, p)?;
                let dets = tr.determinants().iter().all(|&d| d == 1);
                Ok((
                    dets && tr.a * n + tr.b * p == 1 && 0 < tr.a && tr.a < p,
                    None,
                ))
            },
        );
        u.check(
            "coset_bijection",
            "coset-bijection",
            u.params(None, &[], &[("n", n)]),
            || {
                let tr = build_transversal(n, p)?;
                let pts = coset_to_p1(&tr)?;
                let printed = (0..p).all(|i| pts[i as usize] == (1, (n * i).rem_euclid(p)))
                    && pts[p as usize] == (0, 1);
                let mut action = true;
                for g in [[[1, 1], [0, 1]], [[0, -1], [1, 0]], [[1, 0], [n, 1]]] {
                    let perm = tr.induced_permutation(&g)?;
                    action &= perm
                        .iter()
                        .enumerate()
                        .all(|(i, &j)| act_on_p1(p, &g, pts[i]) == pts[j]);
                }
                Ok((printed && action, None))
            },
        );
        for k in u.cfg.k.pick(0..=p - 1) {
            if !(0..p).contains(&k) {
                u.skip(
                    "induced_splitting",
                    "induced-splitting",
                    u.params(Some(k), &[], &[("n", n)]),
                    "k outside 0..p-1",
                );
                continue;
            }
            u.check(
                "induced_splitting",
                "induced-splitting",
                u.params(Some(k), &[], &[("n", n)]),
                || {
                    let tr = build_transversal(n, p)?;
                    let dec = induced_decomposition(t, &tr, k)?;
                    dec.b.check(Group::SL2)?;
                    dec.to_constants.check(Group::GL2)?;
                    dec.to_steinberg.check(Group::GL2)?;
                    let dims = dec.tensor.dim() as i64 == (p + 1) * (k + 1)
                        && dec.to_constants.target.dim() + dec.to_steinberg.target.dim()
                            == dec.tensor.dim();
                    Ok((
                        dims && dec.b.matrix.is_invertible(t)
                            && dec.splitting_matrix().is_invertible(t),
                        None,
                    ))
                },
            );
        }
    }
    for k in u.cfg.k.pick(0..=p - 1) {
        if !(0..p).contains(&k) {
            continue;
        }
        u.check(
            "multiplication_rank",
            "multiplication-map",
            u.params(Some(k), &[], &[]),
            || {
                let m = alpha_coefficient_map(t, k)?;
                m.check(Group::GL2)?;
                let mut ok = m.rank() as i64 == k + p;
                if k == 0 {
                    let dec = induced_decomposition(t, &build_transversal(5.max(p + 1), p)?, 0)?;
                    let comp = alpha_composite(&dec, &m);
                    comp.check(Group::GL2)?;
                    ok &= comp.rank() as i64 == p;
                }
                Ok((ok, Some(format!("rank {}", m.rank()))))
            },
        );
    }
}

/// Runs every selected suite over the grid. Configuration errors abort; check
/// failures are recorded and never abort.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut towers = Vec::new();
    for &q in &cfg.qs {
        let t = tower_for(q, cfg.max_q)?;
        if t.p() == 2 && cfg.suites.iter().any(|&s| s != Suite::Fields) {
            return Err(Error::Config(format!(
                "q = {q}: characteristic 2 supports the fields suite only"
            )));
        }
        towers.push(t);
    }
    if let KRange::Range(a, b) = cfg.k {
        if b - a > 1000 {
            return Err(Error::Config("k range longer than 1000".into()));
        }
    }
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();

    let mut checks: Vec<CheckRecord> = std::thread::scope(|scope| {
        let handles: Vec<_> = towers
            .iter()
            .map(|t| {
                let suites = &suites;
                scope.spawn(move || {
                    let needs_chars = suites.contains(&Suite::Characters)
                        || (suites.contains(&Suite::Diagram) && t.q() > t.p());
                    let data = needs_chars.then(|| CharacterData::new(t));
                    let mut out = Vec::new();
                    for &suite in suites {
                        let mut u = Unit {
                            suite,
                            t,
                            cfg,
                            out: Vec::new(),
                        };
                        match suite {
                            Suite::Fields => fields_suite(&mut u),
                            Suite::Serre => serre_suite(&mut u),
                            Suite::Characters => {
                                characters_suite(&mut u, data.as_ref().expect("built"))
                            }
                            Suite::Diagram => {
                                diagram_suite(&mut u, data.as_ref().and_then(|d| d.as_ref().ok()))
                            }
                            Suite::Nonsplit => nonsplit_suite(&mut u),
                            Suite::Alpha => alpha_suite(&mut u),
                        }
                        out.extend(u.out);
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    checks.sort_by(|a, b| {
        (a.suite.name(), a.params.q, a.params.k, &a.params.s).cmp(&(
            b.suite.name(),
            b.params.q,
            b.params.k,
            &b.params.s,
        ))
    });
    Ok(VerificationReport {
        version: TOOL_VERSION.into(),
        tower: towers.iter().map(TowerDescriptor::of).collect(),
        seed: cfg.seed,
        checks,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Tsv,
    Text,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "tsv" => Ok(Format::Tsv),
            "text" => Ok(Format::Text),
            _ => Err(Error::Config(format!("unknown format {s}"))),
        }
    }
}

fn tsv_field(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

fn params_text(p: &Params) -> String {
    let mut s = format!("q={}", p.q);
    if let Some(k) = p.k {
        let _ = write!(s, " k={k}");
    }
    if !p.s.is_empty() {
        let v: Vec<String> = p.s.iter().map(|x| x.to_string()).collect();
        let _ = write!(s, " s={}", v.join(","));
    }
    for (n, v) in &p.extra {
        let _ = write!(s, " {n}={v}");
    }
    s
}

fn status_text(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Skipped => "skipped",
    }
}

pub fn emit_report(r: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Tsv => {
            let mut s = String::from("suite\tname\tanchor\tparams\tstatus\tdetail\twall_ms\n");
            for c in &r.checks {
                let _ = writeln!(
                    s,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    c.suite.name(),
                    c.name,
                    c.anchor,
                    params_text(&c.params),
                    status_text(c.status),
                    tsv_field(c.detail.as_deref().unwrap_or("")),
                    c.wall_ms.map(|m| format!("{m:.3}")).unwrap_or_default(),
                );
            }
            s
        }
        Format::Text => {
            let mut s = format!("modrep {} seed {}\n", r.version, r.seed);
            for t in &r.tower {
                let _ = writeln!(
                    s,
                    "tower q={} p={} n={} modulus={:?}",
                    t.q, t.p, t.n, t.modulus
                );
            }
            for c in &r.checks {
                let _ = write!(
                    s,
                    "{:<7} {:<10} {:<26} {}",
                    status_text(c.status).to_uppercase(),
                    c.suite.name(),
                    c.name,
                    params_text(&c.params)
                );
                if let Some(d) = &c.detail {
                    let _ = write!(s, "  [{d}]");
                }
                if let Some(ms) = c.wall_ms {
                    let _ = write!(s, "  {ms:.1} ms");
                }
                s.push('\n');
            }
            let count = |st| r.checks.iter().filter(|c| c.status == st).count();
            let _ = writeln!(
                s,
                "{} passed, {} failed, {} skipped",
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Skipped)
            );
            s
        }
    }
}

#[derive(Serialize)]
struct DimRow {
    k: i64,
    sym: usize,
    cuspidal_quotient: Option<usize>,
    holomorphic: Option<usize>,
    complement: Option<usize>,
}

/// Dimension table (`what = dims`) or Brauer character table (`what = chars`).
pub fn table(q: u64, what: &str, format: Format) -> Result<String> {
    let t = tower_for(q, FIELD_BOUND)?;
    let qi = q as i64;
    let p = t.p() as i64;
    match what {
        "dims" => {
            let rows: Vec<DimRow> = (0..=2 * qi)
                .map(|k| {
                    let cusp = (2..p).contains(&k);
                    DimRow {
                        k,
                        sym: (k + 1) as usize,
                        cuspidal_quotient: cusp.then_some((qi - 1) as usize),
                        holomorphic: cusp.then_some((k - 1) as usize),
                        complement: cusp.then_some((qi - k) as usize),
                    }
                })
                .collect();
            let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
            Ok(match format {
                Format::Json => {
                    serde_json::to_string_pretty(
                        &json!({"tower": TowerDescriptor::of(&t), "dims": rows}),
                    )
                    .expect("serializes")
                        + "\n"
                }
                Format::Tsv | Format::Text => {
                    let sep = if format == Format::Tsv { "\t" } else { "  " };
                    let mut s = ["k", "sym", "cuspidal_quotient", "holomorphic", "complement"]
                        .join(sep)
                        + "\n";
                    for r in rows {
                        s += &[
                            r.k.to_string(),
                            r.sym.to_string(),
                            opt(r.cuspidal_quotient),
                            opt(r.holomorphic),
                            opt(r.complement),
                        ]
                        .join(sep);
                        s.push('\n');
                    }
                    s
                }
            })
        }
        "chars" => {
            let data = CharacterData::new(&t)?;
            let classes: Vec<&str> = data.ctx.classes.iter().map(|c| c.label.as_str()).collect();
            let rows: Vec<(String, Vec<Vec<String>>)> = data
                .inventory
                .labels
                .iter()
                .zip(&data.inventory.characters)
                .map(|(l, c)| (l.clone(), c.render()))
                .collect();
            Ok(match format {
                Format::Json => serde_json::to_string_pretty(&json!({
                    "tower": TowerDescriptor::of(&t),
                    "classes": classes,
                    "characters": rows.iter().map(|(l, v)| json!({"label": l, "values": v})).collect::<Vec<_>>(),
                }))
                .expect("serializes")
                    + "\n",
                Format::Tsv | Format::Text => {
                    let mut s = format!("character\t{}\n", classes.join("\t"));
                    for (l, v) in rows {
                        let cells: Vec<String> = v.iter().map(|c| format!("[{}]", c.join(","))).collect();
                        s += &format!("{l}\t{}\n", cells.join("\t"));
                    }
                    s
                }
            })
        }
        other => Err(Error::Config(format!("unknown table {other}"))),
    }
}

/// Basis labels and all row and vertical matrices of one diagram.
pub fn diagram_json(q: u64, k: i64, s: i64, form: &str) -> Result<String> {
    let t = tower_for(q, FIELD_BOUND)?;
    let form = DrForm::ALL
        .into_iter()
        .find(|f| f.name() == form)
        .ok_or_else(|| Error::Config(format!("unknown form {form}")))?;
    let sv = t.from_int(s);
    let d = build_diagram(&t, k, form, sv)?;
    let mats: serde_json::Map<String, serde_json::Value> = d
        .matrices()
        .into_iter()
        .map(|(n, m)| (n, json!(m)))
        .collect();
    let out = json!({
        "tower": TowerDescriptor::of(&t),
        "k": k,
        "s": s,
        "form": form.name(),
        "dr_basis": d.dr.labels(),
        "quotient_basis": d.bottom.quotient.module().labels(),
        "matrices": mats,
    });
    Ok(serde_json::to_string_pretty(&out).expect("serializes") + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_range_parsing() {
        assert_eq!(KRange::parse("all").unwrap(), KRange::All);
        assert_eq!(KRange::parse("2..6").unwrap(), KRange::Range(2, 6));
        assert_eq!(KRange::parse("-10..=30").unwrap(), KRange::Range(-10, 30));
        assert_eq!(KRange::parse("3").unwrap(), KRange::Range(3, 3));
        assert!(KRange::parse("5..2").is_err());
        assert!(KRange::parse("x").is_err());
    }

    #[test]
    fn empty_suites_give_empty_report() {
        let cfg = SuiteConfig {
            qs: vec![5],
            suites: vec![],
            ..SuiteConfig::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert!(r.checks.is_empty());
        assert_eq!(r.exit_code(), 0);
        let v: serde_json::Value = serde_json::from_str(&emit_report(&r, Format::Json)).unwrap();
        assert_eq!(v["checks"], serde_json::json!([]));
        assert!(v.get("tower").is_some() && v.get("seed").is_some());
    }

    #[test]
    fn characteristic_two_fields_only() {
        let mut cfg = SuiteConfig {
            qs: vec![4],
            suites: vec![Suite::Diagram],
            ..SuiteConfig::default()
        };
        assert!(run_suite(&cfg).is_err());
        cfg.suites = vec![Suite::Fields];
        let r = run_suite(&cfg).unwrap();
        assert!(r.checks.iter().all(|c| c.status != Status::Fail), "{r:?}");
        cfg.qs = vec![6];
        assert!(matches!(run_suite(&cfg), Err(Error::NotPrimePower(6))));
    }

    #[test]
    fn diagram_q5_three_records() {
        let cfg = SuiteConfig {
            qs: vec![5],
            suites: vec![Suite::Diagram],
            ..SuiteConfig::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.checks.len(), 3);
        assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{r:?}");
        let ks: Vec<_> = r.checks.iter().map(|c| c.params.k).collect();
        assert_eq!(ks, vec![Some(2), Some(3), Some(4)]);
    }

    #[test]
    fn one_failure_sets_exit_code_and_shows_in_every_format() {
        let cfg = SuiteConfig {
            qs: vec![5],
            suites: vec![Suite::Diagram],
            ..SuiteConfig::default()
        };
        let mut r = run_suite(&cfg).unwrap();
        r.checks[1].status = Status::Fail;
        r.checks[1].detail = Some("forced".into());
        assert_eq!(r.failures(), 1);
        assert_eq!(r.exit_code(), 1);
        for f in [Format::Json, Format::Tsv, Format::Text] {
            assert!(emit_report(&r, f).contains("forced"), "{f:?}");
        }
    }
}
