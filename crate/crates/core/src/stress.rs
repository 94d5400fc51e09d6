//! Equilibrium stresses of the dilation system: stress spaces, stress
//! matrices, recovery of the Jacobian's dilation-row multipliers, rank
//! certificates of global rigidity, and the nowhere-zero perturbation the
//! extension construction relies on.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use thiserror::Error;

use crate::construct::ConstructionStep;
use crate::exactla::RationalMatrix;
use crate::framework::{framework_to_json, DilationProblem, Framework, FrameworkError};
use crate::graph::Graph;
use crate::matrices::{dilation_jacobian, dr_matrix, MatricesError};
use crate::rational::{
    format_rational, parse_rational, primitive_integer_vector, rat, rat_int, Rational,
};

#[derive(Debug, Error)]
pub enum StressError {
    #[error(transparent)]
    Matrices(#[from] MatricesError),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error("stress has {found} entries but the graph has {expected} edges")]
    LengthMismatch { found: usize, expected: usize },
    #[error("the vector is not a stress of the dilation system")]
    NotADilationStress,
    #[error("the stress does not attain the maximal stress-matrix rank of its space")]
    NotMaximalRank,
    #[error("no nowhere-zero stress with the required rank was found")]
    NoNowhereZeroStress,
    #[error("certificate rejected: {reason}")]
    InvalidCertificate { reason: String },
    #[error("malformed certificate document: {0}")]
    Json(String),
}

/// How many random basis combinations a stress search tries after the basis
/// elements themselves.
const RANDOM_COMBINATIONS: usize = 50;
/// Random combination coefficients are integers in
/// [-COEFFICIENT_BOUND, COEFFICIENT_BOUND].
const COEFFICIENT_BOUND: i64 = 10;

/// True iff `sigma` lies in the left nullspace of the reduced
/// dilation-rigidity matrix at `(f, k)` — equivalently, it is an equilibrium
/// stress of the projected framework that also annihilates every dilation
/// coordinate's quadratic form.
pub fn is_dilation_stress(
    f: &Framework,
    k: usize,
    sigma: &[Rational],
) -> Result<bool, StressError> {
    let expected = f.graph().edge_count();
    if sigma.len() != expected {
        return Err(StressError::LengthMismatch {
            found: sigma.len(),
            expected,
        });
    }
    let dr = dr_matrix(f, k)?;
    Ok(dr.vec_mul(sigma).iter().all(Zero::is_zero))
}

/// The weighted-Laplacian stress matrix of `sigma` on `g`: entry (u, v) is
/// -sigma_uv on edges and 0 on non-edges; the diagonal (v, v) holds the sum
/// of sigma over edges at v, so every row and column sums to zero.
pub fn stress_matrix(g: &Graph, sigma: &[Rational]) -> RationalMatrix {
    assert_eq!(
        sigma.len(),
        g.edge_count(),
        "stress length must match the edge count"
    );
    let mut omega = RationalMatrix::zeros(g.n(), g.n());
    for (idx, &(u, v)) in g.edges().iter().enumerate() {
        let s = &sigma[idx];
        omega[(u, v)] = -s;
        omega[(v, u)] = -s;
        omega[(u, u)] += s;
        omega[(v, v)] += s;
    }
    omega
}

/// A basis of the stress space of `(f, k)`: the left nullspace of the
/// reduced dilation-rigidity matrix, each element normalized to a primitive
/// integer vector whose first nonzero entry is positive. Both defining
/// conditions — coordinate-wise equilibrium of the projected framework and
/// vanishing of each dilation quadratic form — are re-checked exactly on
/// every returned element.
pub fn stress_space(f: &Framework, k: usize) -> Result<Vec<Vec<Rational>>, StressError> {
    let dr = dr_matrix(f, k)?;
    let basis: Vec<Vec<Rational>> = dr
        .left_nullspace()
        .iter()
        .map(|v| {
            primitive_integer_vector(v)
                .into_iter()
                .map(Rational::from)
                .collect()
        })
        .collect();
    let d = f.d();
    for sigma in &basis {
        let omega = stress_matrix(f.graph(), sigma);
        for c in 0..d {
            let coords = f.coordinate_slice(c);
            let image = omega.mul_vec(&coords);
            if c < d - k {
                assert!(
                    image.iter().all(Zero::is_zero),
                    "stress basis element fails equilibrium in coordinate {c}"
                );
            } else {
                let form: Rational = image.iter().zip(&coords).map(|(a, b)| a * b).sum();
                assert!(
                    form.is_zero(),
                    "stress basis element fails the quadratic form in coordinate {c}"
                );
            }
        }
    }
    Ok(basis)
}

/// The dilation-row multipliers forced by `sigma`: for each dilation
/// coordinate i and each vertex v != v0 (in the dilation Jacobian's row
/// order), the value -p_i(v0) * sum over neighbors w of
/// sigma_vw (p_i(v) - p_i(w)). The pair (sigma, lambda) is verified to
/// annihilate the Jacobian from the left before returning.
pub fn lambda_from_sigma(
    prob: &DilationProblem,
    sigma: &[Rational],
) -> Result<Vec<Rational>, StressError> {
    let f = prob.framework();
    if !is_dilation_stress(f, prob.k(), sigma)? {
        return Err(StressError::NotADilationStress);
    }
    let g = f.graph();
    let v0 = prob.v0();
    let mut lambda = Vec::with_capacity(prob.k() * (f.n() - 1));
    for i in prob.dilation_coords() {
        for v in 0..f.n() {
            if v == v0 {
                continue;
            }
            let mut pull = Rational::zero();
            for w in g.neighbors(v) {
                let idx = g.edge_index(v.min(w), v.max(w)).expect("neighbor edge");
                pull += &sigma[idx] * (f.coordinate(v, i) - f.coordinate(w, i));
            }
            lambda.push(-(f.coordinate(v0, i) * pull));
        }
    }
    let jacobian = dilation_jacobian(prob);
    let mut combined = sigma.to_vec();
    combined.extend(lambda.iter().cloned());
    assert!(
        jacobian.vec_mul(&combined).iter().all(Zero::is_zero),
        "recovered multipliers do not complete a left-kernel element"
    );
    Ok(lambda)
}

/// A verified witness of global rigidity at a realization: a stress whose
/// stress matrix attains rank |V| - d + k - 1, together with the
/// construction trace that produced the framework (empty when the
/// certificate came from a direct search).
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub framework: Framework,
    pub k: usize,
    pub sigma: Vec<Rational>,
    pub rank_omega: usize,
    pub target: i64,
    pub trace: Vec<ConstructionStep>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCertificate {
    n: i64,
    edges: Vec<(usize, usize)>,
    d: usize,
    positions: Vec<Vec<String>>,
    k: usize,
    sigma: Vec<String>,
    rank_omega: usize,
    target: i64,
    #[serde(default)]
    trace: Vec<ConstructionStep>,
}

impl Certificate {
    /// Re-derives every claim from scratch: stress membership, the recorded
    /// rank of the stress matrix, and agreement with the rank target.
    pub fn verify(&self) -> Result<(), StressError> {
        let fail = |reason: String| Err(StressError::InvalidCertificate { reason });
        if !is_dilation_stress(&self.framework, self.k, &self.sigma)? {
            return fail("sigma is not a stress of the dilation system".into());
        }
        let expected_target =
            self.framework.n() as i64 - self.framework.d() as i64 + self.k as i64 - 1;
        if self.target != expected_target {
            return fail(format!(
                "recorded target {} but |V| - d + k - 1 = {expected_target}",
                self.target
            ));
        }
        let rank = stress_matrix(self.framework.graph(), &self.sigma).rank();
        if rank != self.rank_omega {
            return fail(format!(
                "recorded rank {} but the stress matrix has rank {rank}",
                self.rank_omega
            ));
        }
        if rank as i64 != self.target {
            return fail(format!("rank {rank} misses the target {}", self.target));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut doc = framework_to_json(&self.framework);
        let object = doc.as_object_mut().expect("framework serializes to an object");
        object.insert("k".into(), self.k.into());
        object.insert(
            "sigma".into(),
            self.sigma
                .iter()
                .map(|s| serde_json::Value::String(format_rational(s)))
                .collect::<Vec<_>>()
                .into(),
        );
        object.insert("rank_omega".into(), self.rank_omega.into());
        object.insert("target".into(), self.target.into());
        object.insert(
            "trace".into(),
            serde_json::to_value(&self.trace).expect("trace serializes"),
        );
        doc
    }

    /// Parses a certificate document and re-verifies it from scratch.
    pub fn from_json(doc: &str) -> Result<Certificate, StressError> {
        let raw: RawCertificate =
            serde_json::from_str(doc).map_err(|e| StressError::Json(e.to_string()))?;
        if raw.n < 1 {
            return Err(StressError::Json("vertex count must be at least 1".into()));
        }
        let graph = Graph::new(raw.n as usize, raw.edges)
            .map_err(|e| StressError::Json(e.to_string()))?;
        let mut positions = Vec::with_capacity(raw.positions.len());
        for (vertex, row) in raw.positions.iter().enumerate() {
            let mut parsed = Vec::with_capacity(row.len());
            for text in row {
                parsed.push(parse_rational(text).map_err(|e| {
                    StressError::Json(format!("position of vertex {vertex}: {e}"))
                })?);
            }
            positions.push(parsed);
        }
        let framework = Framework::new(graph, raw.d, positions)?;
        let mut sigma = Vec::with_capacity(raw.sigma.len());
        for (idx, text) in raw.sigma.iter().enumerate() {
            sigma.push(
                parse_rational(text)
                    .map_err(|e| StressError::Json(format!("sigma entry {idx}: {e}")))?,
            );
        }
        let certificate = Certificate {
            framework,
            k: raw.k,
            sigma,
            rank_omega: raw.rank_omega,
            target: raw.target,
            trace: raw.trace,
        };
        certificate.verify()?;
        Ok(certificate)
    }
}

/// The basis elements followed by random small-integer combinations of
/// them; every returned vector is a nonzero member of the spanned space.
fn candidate_stresses(basis: &[Vec<Rational>], rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    if basis.is_empty() {
        return Vec::new();
    }
    let mut out: Vec<Vec<Rational>> = basis.to_vec();
    let width = basis[0].len();
    for _ in 0..RANDOM_COMBINATIONS {
        let mut combo = vec![Rational::zero(); width];
        for element in basis {
            let c = rng.random_range(-COEFFICIENT_BOUND..=COEFFICIENT_BOUND);
            if c == 0 {
                continue;
            }
            let c = rat_int(c);
            for (dst, src) in combo.iter_mut().zip(element) {
                *dst += &c * src;
            }
        }
        if combo.iter().any(|x| !x.is_zero()) {
            out.push(combo);
        }
    }
    out
}

/// Searches the stress space of `(f, k)` for a stress whose stress matrix
/// attains rank |V| - d + k - 1. At a generic realization such a stress
/// certifies global rigidity. Tries each basis element, then random integer
/// combinations; `None` is inconclusive, since the rank condition is
/// sufficient but not known to be necessary. Frameworks too small for a
/// positive target are never certified this way.
pub fn global_sufficiency(
    f: &Framework,
    k: usize,
    seed: u64,
) -> Result<Option<Certificate>, StressError> {
    let target = f.n() as i64 - f.d() as i64 + k as i64 - 1;
    if target < 1 {
        return Ok(None);
    }
    let basis = stress_space(f, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for sigma in candidate_stresses(&basis, &mut rng) {
        if stress_matrix(f.graph(), &sigma).rank() as i64 != target {
            continue;
        }
        let sigma: Vec<Rational> = primitive_integer_vector(&sigma)
            .into_iter()
            .map(Rational::from)
            .collect();
        let certificate = Certificate {
            framework: f.clone(),
            k,
            sigma,
            rank_omega: target as usize,
            target,
            trace: Vec::new(),
        };
        certificate
            .verify()
            .expect("a freshly found certificate must re-verify");
        return Ok(Some(certificate));
    }
    Ok(None)
}

/// Replaces `sigma` by a stress in the same space that vanishes nowhere and
/// has the same stress-matrix rank, by adding epsilon times a stress that is
/// nonzero on every vanishing edge, halving epsilon until both properties
/// hold. Requires `sigma` to attain the maximal rank of its space (checked
/// against basis combinations): only from the top is the rank stable under
/// small perturbations.
pub fn perturb_nowhere_zero(
    f: &Framework,
    k: usize,
    sigma: &[Rational],
    seed: u64,
) -> Result<Vec<Rational>, StressError> {
    if !is_dilation_stress(f, k, sigma)? {
        return Err(StressError::NotADilationStress);
    }
    if sigma.iter().all(|x| !x.is_zero()) {
        return Ok(sigma.to_vec());
    }
    let base_rank = stress_matrix(f.graph(), sigma).rank();
    let basis = stress_space(f, k)?;
    if basis.is_empty() {
        // sigma is the zero stress of a trivial space; nothing to reach.
        return Err(StressError::NoNowhereZeroStress);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates = candidate_stresses(&basis, &mut rng);
    if candidates
        .iter()
        .any(|c| stress_matrix(f.graph(), c).rank() > base_rank)
    {
        return Err(StressError::NotMaximalRank);
    }
    let vanishing: Vec<usize> = sigma
        .iter()
        .enumerate()
        .filter(|(_, x)| x.is_zero())
        .map(|(e, _)| e)
        .collect();
    let star = candidates
        .iter()
        .find(|c| vanishing.iter().all(|&e| !c[e].is_zero()))
        .ok_or(StressError::NoNowhereZeroStress)?;
    let mut eps = rat(1, 2);
    for _ in 0..64 {
        let moved: Vec<Rational> = sigma
            .iter()
            .zip(star)
            .map(|(s, t)| s + &eps * t)
            .collect();
        if moved.iter().all(|x| !x.is_zero())
            && stress_matrix(f.graph(), &moved).rank() == base_rank
        {
            debug_assert!(is_dilation_stress(f, k, &moved).unwrap());
            return Ok(moved);
        }
        eps /= rat_int(2);
    }
    Err(StressError::NoNowhereZeroStress)
}
