//! Numeric evaluation of stated arcs and knots against `SL(n, C)`
//! representations of a free groupoid, and Monte-Carlo checks of the
//! matrix identities behind the classical-limit trace map.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::report::{CheckOutcome, CheckReport};
use crate::skeinconst::Permutation;

pub type CMatrix = DMatrix<Complex64>;

pub const PROP52_TOL: f64 = 1e-9;
pub const DET_EXPANSION_TOL: f64 = 1e-8;
pub const CAP_TOL: f64 = 1e-9;
pub const CONJUGATION_TOL: f64 = 1e-9;

/// `d_n = (-1)^{n-1}`.
pub fn d_n(n: usize) -> f64 {
    if n % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// `i -> n + 1 - i`.
pub fn bar(n: usize, i: usize) -> usize {
    n + 1 - i
}

/// `A_{ij} = (-1)^{i+1} delta_{bar i, j}`; `det A = 1`, `A^2 = d_n I`.
pub fn matrix_a(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (r + 1, c + 1);
        if bar(n, i) == j {
            Complex64::new(if i % 2 == 1 { 1.0 } else { -1.0 }, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn det(m: &CMatrix) -> Complex64 {
    m.clone().determinant()
}

/// Random matrix in `SL(n, C)` from stream 0 of `seed`.
pub fn random_sln(n: usize, seed: u64) -> CMatrix {
    random_sln_stream(n, seed, 0)
}

/// Complex Gaussian entries rescaled by the principal `n`-th root of
/// `1/det`. Near-singular draws are discarded and redrawn from the same
/// stream, so the result depends only on `(n, seed, stream)`.
pub fn random_sln_stream(n: usize, seed: u64, stream: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    loop {
        let m = CMatrix::from_fn(n, n, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        });
        let d = det(&m);
        if d.norm() < 1e-3 {
            continue;
        }
        let scale = (-d.ln() / n as f64).exp();
        let m = m * scale;
        if (det(&m) - 1.0).norm() < 1e-12 {
            return m;
        }
    }
}

/// Largest entrywise deviation relative to `max(1, max |b_ij|)`.
pub fn relative_deviation(a: &CMatrix, b: &CMatrix) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

fn scalar_deviation(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// One generator of the free groupoid, `source -> target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidGenerator {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// Finitely generated free groupoid; a free group when every generator is
/// a loop at a single base point.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupoidPresentation {
    generators: Vec<GroupoidGenerator>,
}

impl GroupoidPresentation {
    pub fn new(generators: Vec<GroupoidGenerator>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for g in &generators {
            if !is_identifier(&g.name) {
                return Err(Error::Web(format!("invalid generator name {:?}", g.name)));
            }
            if !seen.insert(g.name.as_str()) {
                return Err(Error::Web(format!("duplicate generator {:?}", g.name)));
            }
        }
        Ok(GroupoidPresentation { generators })
    }

    /// Free group on `names`, every generator a loop at `*`.
    pub fn free_group(names: &[&str]) -> Result<Self> {
        Self::new(
            names
                .iter()
                .map(|s| GroupoidGenerator { name: s.to_string(), source: "*".into(), target: "*".into() })
                .collect(),
        )
    }

    pub fn generators(&self) -> &[GroupoidGenerator] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&GroupoidGenerator> {
        self.generators.iter().find(|g| g.name == name)
    }

    /// `(source, target)` of a composable word; `None` for the empty word.
    pub fn endpoints(&self, w: &GroupoidWord) -> Result<Option<(String, String)>> {
        let mut ends: Option<(String, String)> = None;
        // Composition is right to left: the last letter is traversed first.
        for (name, exp) in w.letters.iter().rev() {
            let g = self.generator(name).ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
            let (s, t) = if *exp > 0 { (&g.source, &g.target) } else { (&g.target, &g.source) };
            ends = match ends {
                None => Some((s.clone(), t.clone())),
                Some((src, tgt)) => {
                    if tgt != *s {
                        return Err(Error::NotComposable(format!(
                            "{name}^{exp} starts at {s} but the path so far ends at {tgt}"
                        )));
                    }
                    Some((src, t.clone()))
                }
            };
        }
        Ok(ends)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A word `g_1^{e_1} ... g_k^{e_k}` with `e = +-1`; `[a b] = [a * b]` means
/// first `b`, then `a`, and evaluates to `rho(a) rho(b)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupoidWord {
    pub letters: Vec<(String, i8)>,
}

impl GroupoidWord {
    pub fn identity() -> Self {
        GroupoidWord { letters: Vec::new() }
    }

    pub fn letter(name: &str) -> Self {
        GroupoidWord { letters: vec![(name.to_string(), 1)] }
    }

    /// Whitespace-separated letters `name`, `name^k` (`k` a nonzero integer,
    /// expanded); `""` and `"1"` denote the identity.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Self::identity());
        }
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                None => (tok, 1i64),
                Some((name, e)) => {
                    let e: i64 = e.parse().map_err(|_| Error::Web(format!("bad exponent in {tok:?}")))?;
                    if e == 0 || e.abs() > 64 {
                        return Err(Error::Web(format!("exponent in {tok:?} must be nonzero and at most 64")));
                    }
                    (name, e)
                }
            };
            if !is_identifier(name) {
                return Err(Error::Web(format!("bad generator name in {tok:?}")));
            }
            for _ in 0..exp.abs() {
                letters.push((name.to_string(), exp.signum() as i8));
            }
        }
        Ok(GroupoidWord { letters })
    }

    /// `self * other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        GroupoidWord { letters }
    }

    pub fn inverse(&self) -> Self {
        GroupoidWord { letters: self.letters.iter().rev().map(|(g, e)| (g.clone(), -e)).collect() }
    }
}

impl std::fmt::Display for GroupoidWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (k, (g, e)) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if *e > 0 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^-1")?;
            }
        }
        Ok(())
    }
}

/// `rho`: generator name -> matrix in `SL(n, C)`.
#[derive(Clone, Debug)]
pub struct Representation {
    n: usize,
    seed: u64,
    assignment: BTreeMap<String, (CMatrix, CMatrix)>,
}

impl Representation {
    pub fn new(n: usize, seed: u64, assignment: BTreeMap<String, CMatrix>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (name, m) in assignment {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::Precondition(format!("matrix for {name} is not {n}x{n}")));
            }
            if (det(&m) - 1.0).norm() >= 1e-12 {
                return Err(Error::Precondition(format!("matrix for {name} is not in SL({n})")));
            }
            let inv = m
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::Precondition(format!("matrix for {name} is singular")))?;
            out.insert(name, (m, inv));
        }
        Ok(Representation { n, seed, assignment: out })
    }

    /// Independent random matrices, generator `k` drawn from stream `k`.
    pub fn random(pres: &GroupoidPresentation, n: usize, seed: u64) -> Self {
        let assignment = pres
            .generators()
            .iter()
            .enumerate()
            .map(|(k, g)| (g.name.clone(), random_sln_stream(n, seed, k as u64)))
            .collect();
        Self::new(n, seed, assignment).expect("random_sln returns SL(n) matrices")
    }

    pub fn trivial(pres: &GroupoidPresentation, n: usize) -> Self {
        let assignment = pres.generators().iter().map(|g| (g.name.clone(), CMatrix::identity(n, n))).collect();
        Self::new(n, 0, assignment).expect("identity is in SL(n)")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn matrix(&self, name: &str) -> Option<&CMatrix> {
        self.assignment.get(name).map(|(m, _)| m)
    }

    /// Ordered product `rho(g_1)^{e_1} ... rho(g_k)^{e_k}`.
    pub fn eval_word(&self, w: &GroupoidWord) -> Result<CMatrix> {
        let mut acc = CMatrix::identity(self.n, self.n);
        for (name, e) in &w.letters {
            let (m, inv) = self.assignment.get(name).ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
            acc *= if *e > 0 { m } else { inv };
        }
        Ok(acc)
    }
}

/// A stated arc: path `word`, states at its two ends, and a `Z/2` spin tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatedArc {
    pub word: GroupoidWord,
    pub state_out: usize,
    pub state_in: usize,
    pub spin: u8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StatedWebClassical {
    pub arcs: Vec<StatedArc>,
    pub knots: Vec<(GroupoidWord, u8)>,
}

fn spin_factor(n: usize, spin: u8) -> f64 {
    if spin % 2 == 1 {
        d_n(n)
    } else {
        1.0
    }
}

/// `d_n^{spin} [A rho(word)]_{bar i, bar j}`.
pub fn eval_arc(arc: &StatedArc, rep: &Representation) -> Result<Complex64> {
    let n = rep.n;
    for s in [arc.state_out, arc.state_in] {
        if !(1..=n).contains(&s) {
            return Err(Error::Precondition(format!("state {s} outside 1..{n}")));
        }
    }
    let m = matrix_a(n) * rep.eval_word(&arc.word)?;
    Ok(m[(bar(n, arc.state_out) - 1, bar(n, arc.state_in) - 1)] * spin_factor(n, arc.spin))
}

/// Product of the arc values and of `d_n^{spin} Trace(rho(loop))` over knots.
pub fn eval_web(web: &StatedWebClassical, rep: &Representation) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for arc in &web.arcs {
        acc *= eval_arc(arc, rep)?;
    }
    for (w, spin) in &web.knots {
        acc *= rep.eval_word(w)?.trace() * spin_factor(rep.n, *spin);
    }
    Ok(acc)
}

/// A web file: the groupoid it lives over and the web itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WebDescription {
    pub presentation: GroupoidPresentation,
    pub web: StatedWebClassical,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawGenerator {
    Name(String),
    Full { name: String, source: String, target: String },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArc {
    word: String,
    i: usize,
    j: usize,
    #[serde(default)]
    spin: u8,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKnot {
    word: String,
    #[serde(default)]
    spin: u8,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeb {
    generators: Vec<RawGenerator>,
    #[serde(default)]
    arcs: Vec<RawArc>,
    #[serde(default)]
    knots: Vec<RawKnot>,
}

/// Parses and validates a web description (see `docs/web-format.md`).
/// States are checked against `n` at evaluation time.
pub fn parse_web(text: &str) -> Result<WebDescription> {
    let raw: RawWeb = serde_json::from_str(text).map_err(|e| Error::Web(e.to_string()))?;
    let generators = raw
        .generators
        .into_iter()
        .map(|g| match g {
            RawGenerator::Name(name) => GroupoidGenerator { name, source: "*".into(), target: "*".into() },
            RawGenerator::Full { name, source, target } => GroupoidGenerator { name, source, target },
        })
        .collect();
    let presentation = GroupoidPresentation::new(generators)?;
    let mut web = StatedWebClassical::default();
    for a in raw.arcs {
        let word = GroupoidWord::parse(&a.word)?;
        presentation.endpoints(&word)?;
        if a.i == 0 || a.j == 0 {
            return Err(Error::Web("states are 1-based".into()));
        }
        web.arcs.push(StatedArc { word, state_out: a.i, state_in: a.j, spin: a.spin % 2 });
    }
    for k in raw.knots {
        let word = GroupoidWord::parse(&k.word)?;
        if let Some((s, t)) = presentation.endpoints(&word)? {
            if s != t {
                return Err(Error::NotComposable(format!("knot {word} runs from {s} to {t}")));
            }
        }
        web.knots.push((word, k.spin % 2));
    }
    Ok(WebDescription { presentation, web })
}

/// `T(X)_{ij} = [A X]_{bar i, bar j}`.
pub fn t_matrix(x: &CMatrix) -> CMatrix {
    let n = x.nrows();
    let ax = matrix_a(n) * x;
    CMatrix::from_fn(n, n, |r, c| ax[(n - 1 - r, n - 1 - c)])
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `trials` independent trials in parallel and keeps, per label, the
/// largest deviation.
fn max_deviations<F>(labels: &[&str], trials: u64, f: F) -> Vec<f64>
where
    F: Fn(u64) -> Vec<f64> + Sync + Send,
{
    (0..trials)
        .into_par_iter()
        .map(f)
        .reduce(|| vec![0.0; labels.len()], |a, b| a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect())
}

fn deviation_outcome(name: &str, dev: f64, tol: f64) -> CheckOutcome {
    CheckOutcome { name: name.to_string(), passed: dev <= tol, detail: Some(format!("max deviation {dev:.3e} (tolerance {tol:.0e})")) }
}

/// Prop. 5.2 on a rank-2 free group: (a) `A T(b*a) = A T(b) A T(a)`,
/// (b) `det T(eta) = 1`, (c) `T(1) = d_n A`.
pub fn check_prop52(n: usize, seed: u64, trials: u64) -> Result<CheckReport> {
    if n < 2 {
        return Err(Error::Precondition("rank must be at least 2".into()));
    }
    let pres = GroupoidPresentation::free_group(&["a", "b"])?;
    let a = matrix_a(n);
    let labels = ["(a) A T(b*a) = A T(b) A T(a)", "(b) det T(eta) = 1", "(c) T(1) = d_n A"];
    let devs = max_deviations(&labels, trials, |t| {
        let rep = Representation::random(&pres, n, seed.wrapping_add(t));
        let ra = rep.eval_word(&GroupoidWord::letter("a")).unwrap();
        let rb = rep.eval_word(&GroupoidWord::letter("b")).unwrap();
        let eta = rep.eval_word(&GroupoidWord::parse("b a^-1 b").unwrap()).unwrap();
        let lhs = &a * t_matrix(&(&rb * &ra));
        let rhs = &a * t_matrix(&rb) * &a * t_matrix(&ra);
        let one = Complex64::new(1.0, 0.0);
        vec![
            relative_deviation(&lhs, &rhs),
            scalar_deviation(det(&t_matrix(&eta)), one),
            relative_deviation(&t_matrix(&CMatrix::identity(n, n)), &(&a * Complex64::new(d_n(n), 0.0))),
        ]
    });
    let outcomes = labels.iter().zip(devs).map(|(l, d)| deviation_outcome(l, d, PROP52_TOL)).collect();
    Ok(CheckReport::new("prop52", json!({ "n": n, "seed": seed, "trials": trials }), outcomes))
}

fn random_states(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(1..=n)).collect()
}

fn sign_of(n: usize) -> f64 {
    if (n * (n - 1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `sum_s (-1)^{l(s)} prod_t X[s(t)][t]`, indices 0-based.
fn signed_sum(x: &CMatrix) -> Complex64 {
    let n = x.nrows();
    Permutation::all(n)
        .map(|s| (0..n).map(|t| x[(s.image(t + 1) - 1, t)]).product::<Complex64>() * s.sign() as f64)
        .sum()
}

/// Values of the two determinant identities for given `M_s`, `N_t` and
/// states; returns `(sink_lhs, sink_rhs, product_lhs, product_rhs)`.
fn det_expansion_sides(ms: &[CMatrix], ns: &[CMatrix], us: &[usize], vs: &[usize]) -> [Complex64; 4] {
    let n = ms.len();
    let a = matrix_a(n);
    let sign = sign_of(n);
    // Sink: sum_s sgn prod_t [A P_t]_{bar s(t), bar u_t} = sign det[col_{bar u_t}(P_t)].
    let ps: Vec<CMatrix> = ms.iter().zip(ns).map(|(m, nn)| m * nn).collect();
    let y = CMatrix::from_fn(n, n, |s, t| (&a * &ps[t])[(bar(n, s + 1) - 1, bar(n, us[t]) - 1)]);
    let cols = CMatrix::from_fn(n, n, |r, t| ps[t][(r, bar(n, us[t]) - 1)]);
    // Product: det(rows bar v_s of A M_s, s = n..1) det(cols bar u_t of N_t)
    //        = sign sum_s sgn prod_t [A M_{s(t)} N_t]_{bar v_{s(t)}, bar u_t}.
    let x = CMatrix::from_fn(n, n, |s, t| (&a * &ms[s] * &ns[t])[(bar(n, vs[s]) - 1, bar(n, us[t]) - 1)]);
    let rows_rev = CMatrix::from_fn(n, n, |r, c| {
        let s = n - 1 - r;
        (&a * &ms[s])[(bar(n, vs[s]) - 1, c)]
    });
    let ncols = CMatrix::from_fn(n, n, |r, t| ns[t][(r, bar(n, us[t]) - 1)]);
    [signed_sum(&y), det(&cols) * sign, det(&rows_rev) * det(&ncols), signed_sum(&x) * sign]
}

/// The determinant identities used when killing sinks/sources and in the
/// product-of-determinants step, with random `M_t`, `N_t` and states.
pub fn check_det_expansion(n: usize, seed: u64, trials: u64) -> Result<CheckReport> {
    if n < 2 {
        return Err(Error::Precondition("rank must be at least 2".into()));
    }
    let labels = ["sink expansion", "product of determinants", "degenerate (all M_t, N_t equal)"];
    let devs = max_deviations(&labels, trials, |t| {
        let mut rng = trial_rng(seed, t);
        let base = seed.wrapping_add(t.wrapping_mul(1 << 20));
        let ms: Vec<_> = (0..n).map(|k| random_sln_stream(n, base, k as u64)).collect();
        let ns: Vec<_> = (0..n).map(|k| random_sln_stream(n, base, (n + k) as u64)).collect();
        let us = random_states(&mut rng, n);
        let vs = random_states(&mut rng, n);
        let [a, b, c, d] = det_expansion_sides(&ms, &ns, &us, &vs);
        let same_m = vec![ms[0].clone(); n];
        let same_n = vec![ns[0].clone(); n];
        let [e, f, g, h] = det_expansion_sides(&same_m, &same_n, &us, &vs);
        vec![
            scalar_deviation(a, b),
            scalar_deviation(c, d),
            scalar_deviation(e, f).max(scalar_deviation(g, h)),
        ]
    });
    let outcomes = labels.iter().zip(devs).map(|(l, d)| deviation_outcome(l, d, DET_EXPANSION_TOL)).collect();
    Ok(CheckReport::new("detexp", json!({ "n": n, "seed": seed, "trials": trials }), outcomes))
}

/// (i) Cap value `d_n [A]_{bar j, bar i} = delta_{bar j, i} (-1)^{n-i}` for
/// every state pair; (ii) cup resolution
/// `sum_i (-1)^{i+1} [A rho(g2)]_{bar u, bar i} [A rho(g1)]_{i, bar v} = [A rho(g2 * g1)]_{bar u, bar v}`.
pub fn check_cap_resolution(n: usize, seed: u64, trials: u64) -> Result<CheckReport> {
    if n < 2 {
        return Err(Error::Precondition("rank must be at least 2".into()));
    }
    let pres = GroupoidPresentation::free_group(&["g1", "g2"])?;
    let trivial = Representation::trivial(&pres, n);
    let mut cap_dev = 0.0f64;
    for i in 1..=n {
        for j in 1..=n {
            let arc = StatedArc { word: GroupoidWord::identity(), state_out: j, state_in: i, spin: 1 };
            let got = eval_arc(&arc, &trivial)?;
            let want = if bar(n, j) == i { if (n - i).is_multiple_of(2) { 1.0 } else { -1.0 } } else { 0.0 };
            cap_dev = cap_dev.max(scalar_deviation(got, Complex64::new(want, 0.0)));
        }
    }
    let a = matrix_a(n);
    let labels = ["cup resolution"];
    let devs = max_deviations(&labels, trials, |t| {
        let rep = Representation::random(&pres, n, seed.wrapping_add(t));
        let a2 = &a * rep.eval_word(&GroupoidWord::letter("g2")).unwrap();
        let a1 = &a * rep.eval_word(&GroupoidWord::letter("g1")).unwrap();
        let composed = &a * rep.eval_word(&GroupoidWord::parse("g2 g1").unwrap()).unwrap();
        let mut worst = 0.0f64;
        for u in 1..=n {
            for v in 1..=n {
                let lhs: Complex64 = (1..=n)
                    .map(|i| a2[(bar(n, u) - 1, bar(n, i) - 1)] * a1[(i - 1, bar(n, v) - 1)] * if i % 2 == 1 { 1.0 } else { -1.0 })
                    .sum();
                worst = worst.max(scalar_deviation(lhs, composed[(bar(n, u) - 1, bar(n, v) - 1)]));
            }
        }
        vec![worst]
    });
    let outcomes = vec![deviation_outcome("cap value", cap_dev, CAP_TOL), deviation_outcome(labels[0], devs[0], CAP_TOL)];
    Ok(CheckReport::new("cap", json!({ "n": n, "seed": seed, "trials": trials }), outcomes))
}

/// `Trace(rho(g w g^{-1})) = Trace(rho(w))` for knot words on a rank-3
/// free group, evaluated through [`eval_web`].
pub fn check_knot_conjugation(n: usize, seed: u64, trials: u64) -> Result<CheckReport> {
    let pres = GroupoidPresentation::free_group(&["a", "b", "c"])?;
    let words = ["a", "a b", "a b^-1 c a", "b^2 c^-1"];
    let conj = ["c", "a b", "b^-1 a^-1 c"];
    let labels = ["knot trace conjugation invariance"];
    let parsed: Vec<GroupoidWord> = words.iter().map(|w| GroupoidWord::parse(w)).collect::<Result<_>>()?;
    let conjs: Vec<GroupoidWord> = conj.iter().map(|w| GroupoidWord::parse(w)).collect::<Result<_>>()?;
    let devs = max_deviations(&labels, trials, |t| {
        let rep = Representation::random(&pres, n, seed.wrapping_add(t));
        let mut worst = 0.0f64;
        for w in &parsed {
            let plain = StatedWebClassical { arcs: vec![], knots: vec![(w.clone(), 0)] };
            let base = eval_web(&plain, &rep).unwrap();
            for g in &conjs {
                let cw = g.compose(w).compose(&g.inverse());
                let web = StatedWebClassical { arcs: vec![], knots: vec![(cw, 0)] };
                worst = worst.max(scalar_deviation(eval_web(&web, &rep).unwrap(), base));
            }
        }
        vec![worst]
    });
    let outcomes = vec![deviation_outcome(labels[0], devs[0], CONJUGATION_TOL)];
    Ok(CheckReport::new("conjugation", json!({ "n": n, "seed": seed, "trials": trials }), outcomes))
}

/// Evaluates a parsed web at a seeded random representation.
pub fn eval_web_description(desc: &WebDescription, n: usize, seed: u64) -> Result<Complex64> {
    let rep = Representation::random(&desc.presentation, n, seed);
    eval_web(&desc.web, &rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn a_matrix() {
        let a2 = matrix_a(2);
        assert_eq!(a2, CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(-1.0), c(0.0)]));
        assert_eq!(&a2 * &a2, CMatrix::identity(2, 2) * c(-1.0));
        assert_eq!(matrix_a(1), CMatrix::identity(1, 1));
        for n in 1..=6 {
            let a = matrix_a(n);
            assert!((det(&a) - 1.0).norm() < 1e-12);
            assert_eq!(&a * &a, CMatrix::identity(n, n) * c(d_n(n)));
        }
    }

    #[test]
    fn random_sln_contract() {
        for seed in 0..20 {
            let m = random_sln(3, seed);
            assert!((det(&m) - 1.0).norm() < 1e-12);
            assert_eq!(m, random_sln(3, seed));
        }
        let d = relative_deviation(&random_sln(3, 1), &random_sln(3, 2));
        assert!(d > 1e-3);
    }

    #[test]
    fn arc_examples() {
        let pres = GroupoidPresentation::free_group(&["g"]).unwrap();
        let rep = Representation::random(&pres, 2, 7);
        let arc = StatedArc { word: GroupoidWord::identity(), state_out: 1, state_in: 2, spin: 0 };
        assert_eq!(eval_arc(&arc, &rep).unwrap(), c(-1.0));
        let flipped = StatedArc { spin: 1, ..arc.clone() };
        assert_eq!(eval_arc(&flipped, &rep).unwrap(), c(1.0));
        let triv = Representation::trivial(&pres, 2);
        let via_g = StatedArc { word: GroupoidWord::letter("g"), ..arc.clone() };
        assert_eq!(eval_arc(&via_g, &triv).unwrap(), eval_arc(&arc, &triv).unwrap());
        let missing = StatedArc { word: GroupoidWord::letter("h"), ..arc };
        assert!(matches!(eval_arc(&missing, &rep), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn web_examples() {
        let pres = GroupoidPresentation::free_group(&["a"]).unwrap();
        let rep = Representation::random(&pres, 3, 1);
        assert_eq!(eval_web(&StatedWebClassical::default(), &rep).unwrap(), c(1.0));
        let knot = StatedWebClassical { arcs: vec![], knots: vec![(GroupoidWord::identity(), 0)] };
        assert_eq!(eval_web(&knot, &rep).unwrap(), c(3.0));
        let a1 = StatedArc { word: GroupoidWord::letter("a"), state_out: 1, state_in: 3, spin: 0 };
        let a2 = StatedArc { word: GroupoidWord::parse("a^-1").unwrap(), state_out: 2, state_in: 2, spin: 1 };
        let both = StatedWebClassical { arcs: vec![a1.clone(), a2.clone()], knots: vec![] };
        let prod = eval_arc(&a1, &rep).unwrap() * eval_arc(&a2, &rep).unwrap();
        assert!((eval_web(&both, &rep).unwrap() - prod).norm() < 1e-14);
        let swapped = StatedWebClassical { arcs: vec![a2, a1], knots: vec![] };
        assert!((eval_web(&swapped, &rep).unwrap() - prod).norm() < 1e-14);
    }

    #[test]
    fn words_and_groupoids() {
        let w = GroupoidWord::parse(" a b^-1  a^2 ").unwrap();
        assert_eq!(w.to_string(), "a b^-1 a a");
        assert_eq!(GroupoidWord::parse(&w.to_string()).unwrap(), w);
        assert_eq!(GroupoidWord::parse("1").unwrap(), GroupoidWord::identity());
        assert!(GroupoidWord::parse("a^0").is_err());
        assert!(GroupoidWord::parse("3a").is_err());
        let pres = GroupoidPresentation::new(vec![
            GroupoidGenerator { name: "x".into(), source: "p".into(), target: "q".into() },
            GroupoidGenerator { name: "y".into(), source: "q".into(), target: "r".into() },
        ])
        .unwrap();
        // "y x": first x (p -> q), then y (q -> r).
        assert_eq!(pres.endpoints(&GroupoidWord::parse("y x").unwrap()).unwrap(), Some(("p".into(), "r".into())));
        assert!(matches!(pres.endpoints(&GroupoidWord::parse("x y").unwrap()), Err(Error::NotComposable(_))));
        assert_eq!(pres.endpoints(&GroupoidWord::parse("x^-1 y^-1").unwrap()).unwrap(), Some(("r".into(), "p".into())));
    }

    #[test]
    fn web_parsing() {
        let text = r#"{"generators": ["a", {"name": "b", "source": "*", "target": "*"}],
                       "arcs": [{"word": "a b^-1 a", "i": 1, "j": 2, "spin": 1}],
                       "knots": [{"word": "a b"}]}"#;
        let desc = parse_web(text).unwrap();
        assert_eq!(desc.web.arcs.len(), 1);
        assert_eq!(desc.web.knots[0].1, 0);
        assert!(parse_web(r#"{"generators": ["a", "a"]}"#).is_err());
        assert!(parse_web(r#"{"generators": ["a"], "arcs": [{"word": "z", "i": 1, "j": 1}]}"#).is_err());
        assert!(parse_web(r#"{"generators": [{"name": "x", "source": "p", "target": "q"}], "knots": [{"word": "x"}]}"#).is_err());
        assert!(parse_web("[").is_err());
        let v = eval_web_description(&desc, 2, 5).unwrap();
        assert_eq!(v, eval_web_description(&desc, 2, 5).unwrap());
    }

    #[test]
    fn t_matrix_identities() {
        for n in 2..=4 {
            let x = random_sln(n, 11);
            let p = CMatrix::from_fn(n, n, |r, c2| c(if r + c2 == n - 1 { 1.0 } else { 0.0 }));
            assert!(relative_deviation(&(matrix_a(n) * t_matrix(&x)), &(&p * &x * &p)) < 1e-12);
        }
    }

    #[test]
    fn trivial_rep_prop52() {
        let pres = GroupoidPresentation::free_group(&["a"]).unwrap();
        let rep = Representation::trivial(&pres, 3);
        let a = matrix_a(3);
        let t = t_matrix(&rep.eval_word(&GroupoidWord::parse("a a").unwrap()).unwrap());
        let ti = t_matrix(&CMatrix::identity(3, 3));
        assert_eq!(&a * t, &a * &ti * &a * &ti);
    }

    /// Read literally, "sum_s sgn prod_t X[s(t)][t] = sign(n) det X" fails
    /// whenever n(n-1)/2 is odd: the signed sum is det X itself.
    #[test]
    fn signed_sum_is_the_plain_determinant() {
        for n in 2..=4 {
            let x = random_sln(n, 3) * c(1.7);
            let s = signed_sum(&x);
            assert!(scalar_deviation(s, det(&x)) < 1e-12);
            if sign_of(n) < 0.0 {
                assert!(scalar_deviation(s, det(&x) * sign_of(n)) > 1.0);
            }
        }
    }

    #[test]
    fn suites_pass() {
        for n in 2..=4 {
            let r = check_prop52(n, 42, 100).unwrap();
            assert!(r.passed, "{r:?}");
        }
        for n in 2..=3 {
            for r in [
                check_det_expansion(n, 42, 100).unwrap(),
                check_cap_resolution(n, 42, 100).unwrap(),
                check_knot_conjugation(n, 42, 100).unwrap(),
            ] {
                assert!(r.passed, "{r:?}");
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&check_prop52(3, 9, 50).unwrap()).unwrap();
        let b = serde_json::to_string(&check_prop52(3, 9, 50).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
