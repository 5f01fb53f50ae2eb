//! The k-quasi-hyperbolic quantities: `delta_k(x, v)` is the largest
//! distance from `x` to the boundary within a k-dimensional affine slice
//! through `x` containing `v`, and `q_k = |v| / (2 delta_k)`.
//!
//! `delta_1` is the chord (line) distance and `delta_d` the plain boundary
//! distance; in between the sup over slices is solved numerically by a
//! max-min scheme: orthonormal completions (one deterministic, one greedy,
//! the rest random) refined by Givens-rotation hill climbing outside, dense
//! direction sampling refined by golden-section (k = 2) or Nelder-Mead on a
//! sphere chart (k >= 3) inside. Hill climbing runs against a coarse
//! direction pattern; every candidate frame that survives is re-measured at
//! full sampling accuracy.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{orthonormal_completion, unit, Domain, Point, Vector};

/// Orthonormal spanning set of a k-dimensional subspace, first vector equal
/// to the normalized direction the subspace is required to contain.
#[derive(Debug, Clone)]
pub struct SubspaceFrame {
    vectors: Vec<Vector>,
}

impl SubspaceFrame {
    pub fn new(vectors: Vec<Vector>) -> Result<Self> {
        let frame = Self { vectors };
        if frame.gram_defect() > 1e-12 {
            return Err(Error::InvalidParameter(
                "subspace frame is not orthonormal".into(),
            ));
        }
        Ok(frame)
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn k(&self) -> usize {
        self.vectors.len()
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn gram_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.vectors.len() {
            for j in i..self.vectors.len() {
                let g = self.vectors[i].dot(&self.vectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    /// Residual of `v` outside the span (zero when the span contains `v`).
    pub fn span_residual(&self, v: &Vector) -> f64 {
        let mut rem = v.clone();
        for w in &self.vectors {
            let c = rem.dot(w);
            rem -= c * w;
        }
        rem.norm()
    }
}

/// Tuning knobs for the `delta_k` max-min optimizer. Defaults are sized so
/// the half-space and ball closed forms are reproduced to 1e-6 / 1e-5
/// relative; everything is overridable for speed or extra accuracy.
#[derive(Debug, Clone)]
pub struct DeltaKOptions {
    /// Orthonormal completions tried for the outer maximization; the first
    /// two are deterministic (coordinate completion and a greedy start
    /// orthogonal to the boundary hints), the rest are random.
    pub restarts: usize,
    /// Direction samples for the full-accuracy inner minimization.
    pub inner_samples: usize,
    /// Starting angle of the Givens line search.
    pub initial_angle: f64,
    /// Line search stops shrinking below this angle.
    pub angle_floor: f64,
    /// A hill-climbing sweep that improves the value by less than this
    /// relative amount terminates the restart.
    pub rel_improvement_tol: f64,
    /// Angular tolerance of the inner golden-section / Nelder-Mead refine.
    pub inner_refine_tol: f64,
    /// Iteration cap for the inner Nelder-Mead refine (k >= 3).
    pub nm_max_iters: usize,
    /// Cap on hill-climbing sweeps per restart.
    pub max_sweeps: usize,
    /// Slice distances above this value are reported as unbounded; at desk
    /// scale (domain diameters of order one) only slices parallel to flat
    /// boundary pieces get there.
    pub unbounded_threshold: f64,
    /// Seed of the optimizer's private random stream; identical seeds give
    /// identical results, so concurrent callers stay reproducible.
    pub seed: u64,
}

impl Default for DeltaKOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            inner_samples: 128,
            initial_angle: std::f64::consts::FRAC_PI_4,
            angle_floor: 1e-4,
            rel_improvement_tol: 1e-7,
            inner_refine_tol: 1e-7,
            nm_max_iters: 400,
            max_sweeps: 50,
            unbounded_threshold: 1e12,
            seed: 0,
        }
    }
}

impl DeltaKOptions {
    /// Lighter settings for bulk sampling; still pass the closed-form
    /// oracles on their benign landscapes.
    pub fn fast(seed: u64) -> Self {
        Self {
            restarts: 4,
            inner_samples: 64,
            seed,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Result of the numeric `delta_k` optimizer. `value` is `+inf` when some
/// admissible slice never meets the boundary; `converged` is false when the
/// best restart was stopped by the sweep cap instead of the improvement
/// tolerance (the best value found is still reported).
#[derive(Debug, Clone)]
pub struct DeltaKOutcome {
    pub value: f64,
    pub frame: Option<SubspaceFrame>,
    pub converged: bool,
}

/// `q` from a slice distance, with the `sup {} = 0` style convention that
/// an unbounded slice gives a vanishing metric.
pub fn q_from_delta(v: &Vector, delta: f64) -> f64 {
    if delta.is_infinite() {
        0.0
    } else {
        v.norm() / (2.0 * delta)
    }
}

/// `delta_k` with the closed forms that are available taken: `k = 1` and
/// `k = d` are definitional (line and boundary distance), and on balls,
/// half-spaces and slabs every order `k <= d-1` equals the line distance
/// (the rigidity domains; the verification suites check the optimizer
/// against exactly these equalities). Other domains go through the numeric
/// optimizer.
pub fn delta_k(
    domain: &Domain,
    x: &Point,
    v: &Vector,
    k: usize,
    options: &DeltaKOptions,
) -> Result<f64> {
    let d = domain.dim();
    validate_order(k, d)?;
    if k == d {
        return domain.boundary_distance(x);
    }
    match domain {
        Domain::Ball(_) | Domain::HalfSpace(_) | Domain::Slab(_) => {
            domain.line_boundary_distance(x, v)
        }
        _ if k == 1 => domain.line_boundary_distance(x, v),
        _ => Ok(delta_k_numeric(domain, x, v, k, options)?.value),
    }
}

/// `q^(k)(x, v) = |v| / (2 delta_k(x, v))`.
pub fn q_k(
    domain: &Domain,
    x: &Point,
    v: &Vector,
    k: usize,
    options: &DeltaKOptions,
) -> Result<f64> {
    Ok(q_from_delta(v, delta_k(domain, x, v, k, options)?))
}

fn validate_order(k: usize, d: usize) -> Result<()> {
    if k == 0 || k > d {
        return Err(Error::InvalidParameter(format!(
            "subspace order must lie in 1..={d}, got {k}"
        )));
    }
    Ok(())
}

/// The numeric max-min optimizer, with no domain-specific shortcuts for
/// `1 < k < d`; this is the route the verification suites compare against
/// the closed forms.
pub fn delta_k_numeric(
    domain: &Domain,
    x: &Point,
    v: &Vector,
    k: usize,
    options: &DeltaKOptions,
) -> Result<DeltaKOutcome> {
    let d = domain.dim();
    validate_order(k, d)?;
    if v.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    if k == 1 {
        return Ok(DeltaKOutcome {
            value: domain.line_boundary_distance(x, v)?,
            frame: Some(SubspaceFrame {
                vectors: vec![unit(v)?],
            }),
            converged: true,
        });
    }
    if k == d {
        return Ok(DeltaKOutcome {
            value: domain.boundary_distance(x)?,
            frame: None,
            converged: true,
        });
    }
    if !domain.contains(x)? {
        return Err(Error::OutsideDomain);
    }

    let v_hat = unit(v)?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let sampler = InnerSampler::new(domain, x, k, options, &mut rng);

    let mut best_value = f64::NEG_INFINITY;
    let mut best_cols: Option<Vec<Vector>> = None;
    let mut best_converged = false;

    for restart in 0..options.restarts.max(1) {
        let mut q = match restart {
            0 => orthonormal_completion(&v_hat),
            1 => greedy_completion(&v_hat, &sampler.hints, &mut rng),
            _ => random_completion(&v_hat, &mut rng),
        };
        let (coarse, converged) = climb(domain, x, k, &mut q, options, &sampler)?;
        let value = if coarse.is_infinite() {
            f64::INFINITY
        } else {
            sampler.inner_min(domain, x, &q[..k], options, Fidelity::Final)?
        };
        if value.is_infinite() {
            return Ok(DeltaKOutcome {
                value: f64::INFINITY,
                frame: SubspaceFrame::new(q[..k].to_vec()).ok(),
                converged: true,
            });
        }
        if value > best_value {
            best_value = value;
            best_cols = Some(q[..k].to_vec());
            best_converged = converged;
        }
    }

    Ok(DeltaKOutcome {
        value: best_value,
        frame: best_cols.and_then(|c| SubspaceFrame::new(c).ok()),
        converged: best_converged,
    })
}

/// Orthonormal basis whose first vector is `v_hat` and whose remaining
/// columns come from Gaussian draws (Haar-uniform completion).
fn random_completion(v_hat: &Vector, rng: &mut ChaCha8Rng) -> Vec<Vector> {
    let d = v_hat.len();
    let mut cols = vec![v_hat.clone()];
    while cols.len() < d {
        let raw = Vector::from_fn(d, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
        if let Some(w) = orthonormalize_against(&raw, &cols) {
            cols.push(w);
        }
    }
    cols
}

/// Completion that puts the frame as orthogonal to the boundary hint
/// directions as possible: those are the slices that stay away from the
/// nearest boundary pieces, which is where the sup lives for flat and round
/// boundaries (exactly optimal for half-spaces, slabs and balls).
fn greedy_completion(v_hat: &Vector, hints: &[Vector], rng: &mut ChaCha8Rng) -> Vec<Vector> {
    let d = v_hat.len();
    let mut cols = vec![v_hat.clone()];
    let mut blocked = vec![v_hat.clone()];
    for h in hints {
        if let Some(b) = orthonormalize_against(h, &blocked) {
            blocked.push(b);
        }
    }
    // directions orthogonal to v_hat and every hint, from a deterministic
    // spread first, then random fill
    for seed_col in orthonormal_completion(v_hat).into_iter().skip(1) {
        if cols.len() == d {
            break;
        }
        if let Some(w) = orthonormalize_against(&seed_col, &blocked) {
            blocked.push(w.clone());
            cols.push(w);
        }
    }
    while cols.len() < d {
        let raw = Vector::from_fn(d, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
        if let Some(w) = orthonormalize_against(&raw, &cols) {
            cols.push(w);
        }
    }
    cols
}

fn orthonormalize_against(raw: &Vector, cols: &[Vector]) -> Option<Vector> {
    let mut w = raw.clone();
    for _ in 0..2 {
        for c in cols {
            let proj = w.dot(c);
            w -= proj * c;
        }
    }
    let n = w.norm();
    if n < 1e-8 {
        None
    } else {
        Some(w / n)
    }
}

fn re_orthonormalize(q: &mut [Vector]) {
    for i in 1..q.len() {
        let (before, rest) = q.split_at_mut(i);
        if let Some(w) = orthonormalize_against(&rest[0], before) {
            rest[0] = w;
        }
    }
}

/// Givens-rotation hill climbing of the inner minimum over the frame
/// columns `1..k` against the complement columns `k..d`, with an
/// accept-or-halve angle line search per plane. Angles warm-start from the
/// previous sweep's accepted magnitude.
fn climb(
    domain: &Domain,
    x: &Point,
    k: usize,
    q: &mut Vec<Vector>,
    options: &DeltaKOptions,
    sampler: &InnerSampler,
) -> Result<(f64, bool)> {
    let d = q.len();
    let mut f_cur = sampler.inner_min(domain, x, &q[..k], options, Fidelity::Search)?;
    if f_cur.is_infinite() {
        return Ok((f64::INFINITY, true));
    }
    let planes = (k - 1) * (d - k);
    let mut warm = vec![options.initial_angle; planes];
    let mut converged = false;
    for _ in 0..options.max_sweeps {
        re_orthonormalize(q);
        let f_start = f_cur;
        let mut plane = 0;
        for i in 1..k {
            for j in k..d {
                let mut theta = warm[plane].clamp(options.angle_floor, options.initial_angle);
                let mut last_accept = 0.0f64;
                while theta >= options.angle_floor {
                    let mut accepted = false;
                    for sign in [1.0f64, -1.0] {
                        let angle = sign * theta;
                        let (ci, cj) = rotate_pair(&q[i], &q[j], angle);
                        let mut cols = q[..k].to_vec();
                        cols[i] = ci.clone();
                        let f_new =
                            sampler.inner_min(domain, x, &cols, options, Fidelity::Search)?;
                        if f_new.is_infinite() {
                            q[i] = ci;
                            q[j] = cj;
                            return Ok((f64::INFINITY, true));
                        }
                        if f_new > f_cur {
                            q[i] = ci;
                            q[j] = cj;
                            f_cur = f_new;
                            accepted = true;
                            break;
                        }
                    }
                    if accepted {
                        last_accept = theta;
                    } else {
                        theta *= 0.5;
                    }
                }
                warm[plane] = if last_accept > 0.0 {
                    4.0 * last_accept
                } else {
                    // nothing accepted: next sweep can start small
                    16.0 * options.angle_floor
                };
                plane += 1;
            }
        }
        let gain = (f_cur - f_start) / f_start.abs().max(1e-300);
        if gain < options.rel_improvement_tol {
            converged = true;
            break;
        }
    }
    Ok((f_cur, converged))
}

fn rotate_pair(a: &Vector, b: &Vector, angle: f64) -> (Vector, Vector) {
    let (s, c) = angle.sin_cos();
    (c * a + s * b, c * b - s * a)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Fidelity {
    /// coarse pattern used inside the hill climb
    Search,
    /// full pattern used to score final frames
    Final,
}

/// Fixed direction patterns reused for every inner minimization of one
/// optimizer call, so the outer objective is a deterministic function of
/// the frame.
struct InnerSampler {
    coeffs_search: Vec<Vec<f64>>,
    coeffs_final: Vec<Vec<f64>>,
    /// directions whose slice projections are always probed: outward hints
    /// toward the nearest boundary pieces
    hints: Vec<Vector>,
    samples_search: usize,
    samples_final: usize,
}

impl InnerSampler {
    fn new(
        domain: &Domain,
        x: &Point,
        k: usize,
        options: &DeltaKOptions,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let samples_final = options.inner_samples.max(8);
        let samples_search = (samples_final / 4).max(16);
        let mut draw = |count: usize| -> Vec<Vec<f64>> {
            let mut out = Vec::with_capacity(count);
            while out.len() < count {
                let raw: Vec<f64> = (0..k)
                    .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                    .collect();
                let norm = raw.iter().map(|c| c * c).sum::<f64>().sqrt();
                if norm > 1e-12 {
                    out.push(raw.into_iter().map(|c| c / norm).collect());
                }
            }
            out
        };
        let (coeffs_search, coeffs_final) = if k >= 3 {
            (draw(samples_search), draw(samples_final))
        } else {
            (Vec::new(), Vec::new())
        };
        Self {
            coeffs_search,
            coeffs_final,
            hints: boundary_direction_hints(domain, x),
            samples_search,
            samples_final,
        }
    }

    /// Minimum exit distance over unit directions of the slice spanned by
    /// `cols`; `+inf` when the slice never meets the boundary.
    fn inner_min(
        &self,
        domain: &Domain,
        x: &Point,
        cols: &[Vector],
        options: &DeltaKOptions,
        fidelity: Fidelity,
    ) -> Result<f64> {
        let out = if cols.len() == 2 {
            self.inner_min_circle(domain, x, cols, options, fidelity)?
        } else {
            self.inner_min_sphere(domain, x, cols, options, fidelity)?
        };
        Ok(if out >= options.unbounded_threshold {
            f64::INFINITY
        } else {
            out
        })
    }

    fn hint_directions(&self, cols: &[Vector]) -> Vec<Vector> {
        let mut dirs = Vec::new();
        for h in &self.hints {
            let mut p = Vector::zeros(cols[0].len());
            for w in cols {
                p += h.dot(w) * w;
            }
            let n = p.norm();
            if n > 1e-10 {
                dirs.push(&p / n);
                dirs.push(-(p / n));
            }
        }
        dirs
    }

    fn inner_min_circle(
        &self,
        domain: &Domain,
        x: &Point,
        cols: &[Vector],
        options: &DeltaKOptions,
        fidelity: Fidelity,
    ) -> Result<f64> {
        let eval = |phi: f64| -> Result<f64> {
            let (s, c) = phi.sin_cos();
            let u = c * &cols[0] + s * &cols[1];
            domain.ray_boundary_distance(x, &u)
        };
        let n = match fidelity {
            Fidelity::Search => self.samples_search,
            Fidelity::Final => self.samples_final,
        };
        let step = std::f64::consts::TAU / n as f64;
        let mut best_phi = 0.0;
        let mut best = f64::INFINITY;
        for i in 0..n {
            let phi = i as f64 * step;
            let val = eval(phi)?;
            if val < best {
                best = val;
                best_phi = phi;
            }
        }
        for h in self.hint_directions(cols) {
            let phi = h.dot(&cols[1]).atan2(h.dot(&cols[0]));
            let val = eval(phi)?;
            if val < best {
                best = val;
                best_phi = phi;
            }
        }
        if best.is_infinite() {
            return Ok(f64::INFINITY);
        }
        let tol = match fidelity {
            Fidelity::Search => 1e-4,
            Fidelity::Final => options.inner_refine_tol,
        };
        let (_, val) = golden_min(
            &|p| eval(p).unwrap_or(f64::INFINITY),
            best_phi - step,
            best_phi + step,
            tol,
        );
        Ok(val.min(best))
    }

    fn inner_min_sphere(
        &self,
        domain: &Domain,
        x: &Point,
        cols: &[Vector],
        options: &DeltaKOptions,
        fidelity: Fidelity,
    ) -> Result<f64> {
        let k = cols.len();
        let coeffs = match fidelity {
            Fidelity::Search => &self.coeffs_search,
            Fidelity::Final => &self.coeffs_final,
        };
        let dir_from = |coeff: &[f64]| -> Vector {
            let mut u = Vector::zeros(cols[0].len());
            for (c, w) in coeff.iter().zip(cols) {
                u += *c * w;
            }
            u
        };
        let mut best = f64::INFINITY;
        let mut best_dir: Option<Vector> = None;
        for coeff in coeffs {
            let u = dir_from(coeff);
            let val = domain.ray_boundary_distance(x, &u)?;
            if val < best {
                best = val;
                best_dir = Some(u);
            }
        }
        // frame axes are always probed; in particular the +-v directions,
        // which keeps the slice value below the line distance
        for w in cols {
            for u in [w.clone(), -w.clone()] {
                let val = domain.ray_boundary_distance(x, &u)?;
                if val < best {
                    best = val;
                    best_dir = Some(u);
                }
            }
        }
        for u in self.hint_directions(cols) {
            let val = domain.ray_boundary_distance(x, &u)?;
            if val < best {
                best = val;
                best_dir = Some(u);
            }
        }
        let Some(best_dir) = best_dir else {
            return Ok(f64::INFINITY);
        };
        if best.is_infinite() {
            return Ok(f64::INFINITY);
        }
        let u0 = unit(&best_dir)?;

        // chart basis: frame directions orthogonal to the incumbent
        let mut chart: Vec<Vector> = Vec::new();
        let mut seen = vec![u0.clone()];
        for w in cols {
            if let Some(t) = orthonormalize_against(w, &seen) {
                seen.push(t.clone());
                chart.push(t);
            }
        }
        debug_assert_eq!(chart.len(), k - 1);
        let objective = |theta: &[f64]| -> f64 {
            let mut u = u0.clone();
            for (t, b) in theta.iter().zip(&chart) {
                u += *t * b;
            }
            let n = u.norm();
            if n < 1e-12 {
                return f64::INFINITY;
            }
            domain
                .ray_boundary_distance(x, &(u / n))
                .unwrap_or(f64::INFINITY)
        };
        let (tol, iters) = match fidelity {
            Fidelity::Search => (1e-4, options.nm_max_iters / 4),
            Fidelity::Final => (options.inner_refine_tol, options.nm_max_iters),
        };
        let h = std::f64::consts::TAU
            / match fidelity {
                Fidelity::Search => self.samples_search,
                Fidelity::Final => self.samples_final,
            } as f64;
        let refined = nelder_mead(&objective, vec![0.0; k - 1], h, tol, iters);
        Ok(refined.min(best))
    }
}

/// Directions likely to point at the nearest boundary pieces; projected
/// into each slice they guard the inner sampling against missing thin exit
/// cones (flat boundaries seen edge-on), and orthogonalized away they seed
/// the greedy outer start.
fn boundary_direction_hints(domain: &Domain, x: &Point) -> Vec<Vector> {
    match domain {
        Domain::Ball(b) => {
            let y = x - &b.center;
            if y.norm() > 1e-12 {
                vec![y.normalize()]
            } else {
                vec![]
            }
        }
        Domain::Ellipsoid(e) => {
            let y = x - &e.center;
            if y.norm() > 1e-12 {
                vec![y.normalize()]
            } else {
                vec![]
            }
        }
        Domain::HalfSpace(h) => vec![h.normal.clone()],
        Domain::Slab(s) => vec![s.normal.clone()],
        Domain::Polytope(p) => p.faces.iter().map(|f| f.normal.clone()).collect(),
        Domain::Implicit(s) => {
            let g = s.grad(x);
            if g.norm() > 1e-12 {
                vec![g.normalize()]
            } else {
                vec![]
            }
        }
    }
}

fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Compact Nelder-Mead for the low-dimensional inner refinement; standard
/// reflection/expansion/contraction/shrink coefficients.
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    start: Vec<f64>,
    scale: f64,
    tol: f64,
    max_iters: usize,
) -> f64 {
    let n = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.clone(), f(&start)));
    for i in 0..n {
        let mut p = start.clone();
        p[i] += scale;
        let fp = f(&p);
        simplex.push((p, fp));
    }
    for _ in 0..max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex[1..]
            .iter()
            .map(|(p, _)| {
                p.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0f64, f64::max);
        if diameter < tol {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(p, _)| p[i]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = (0..n)
            .map(|i| centroid[i] + (centroid[i] - worst.0[i]))
            .collect();
        let fr = f(&reflect);
        if fr < simplex[0].1 {
            let expand: Vec<f64> = (0..n)
                .map(|i| centroid[i] + 2.0 * (centroid[i] - worst.0[i]))
                .collect();
            let fe = f(&expand);
            simplex[n] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflect, fr);
        } else {
            let contract: Vec<f64> = (0..n)
                .map(|i| centroid[i] + 0.5 * (worst.0[i] - centroid[i]))
                .collect();
            let fc = f(&contract);
            if fc < worst.1 {
                simplex[n] = (contract, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<f64> = entry
                        .0
                        .iter()
                        .zip(&best)
                        .map(|(p, b)| b + 0.5 * (p - b))
                        .collect();
                    entry.1 = f(&shrunk);
                    entry.0 = shrunk;
                }
            }
        }
    }
    simplex
        .iter()
        .map(|(_, v)| *v)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use approx::assert_relative_eq;

    #[test]
    fn definitional_orders() {
        let ball = Domain::unit_ball(3);
        let x = point(&[0.5, 0.0, 0.0]);
        let v = point(&[0.0, 1.0, 0.0]);
        let opts = DeltaKOptions::default();
        assert_relative_eq!(
            delta_k(&ball, &x, &v, 1, &opts).unwrap(),
            0.75f64.sqrt(),
            max_relative = 1e-12
        );
        assert_relative_eq!(delta_k(&ball, &x, &v, 3, &opts).unwrap(), 0.5);
    }

    #[test]
    fn halfspace_numeric_matches_closed_form() {
        let hs = Domain::half_space_x1(3);
        let opts = DeltaKOptions::default();
        let x = point(&[1.0, 0.0, 0.0]);
        let v = point(&[1.0, 1.0, 0.0]);
        let out = delta_k_numeric(&hs, &x, &v, 2, &opts).unwrap();
        assert!(out.converged);
        assert_relative_eq!(out.value, 2.0f64.sqrt(), max_relative = 1e-6);
        // tangential direction: some slice never meets the boundary
        let v = point(&[0.0, 1.0, 0.0]);
        let out = delta_k_numeric(&hs, &x, &v, 2, &opts).unwrap();
        assert!(out.value.is_infinite());
    }

    #[test]
    fn ball_numeric_matches_line_distance() {
        let ball = Domain::unit_ball(3);
        let opts = DeltaKOptions::default();
        let x = point(&[0.5, 0.0, 0.0]);
        let v = point(&[0.0, 1.0, 0.0]);
        let out = delta_k_numeric(&ball, &x, &v, 2, &opts).unwrap();
        assert_relative_eq!(out.value, 0.866025, max_relative = 1e-5);
        assert_relative_eq!(q_from_delta(&v, out.value), 0.577350, max_relative = 1e-5);
        let frame = out.frame.unwrap();
        assert!(frame.gram_defect() < 1e-12);
        assert!(frame.span_residual(&v) < 1e-10);
    }

    #[test]
    fn qk_examples() {
        let hs = Domain::half_space_x1(3);
        let opts = DeltaKOptions::default();
        let x = point(&[1.0, 0.0, 0.0]);
        assert_relative_eq!(
            q_k(&hs, &x, &point(&[1.0, 0.0, 0.0]), 2, &opts).unwrap(),
            0.5,
            max_relative = 1e-12
        );
        // zero when the slice distance is unbounded
        assert_relative_eq!(q_k(&hs, &x, &point(&[0.0, 1.0, 0.0]), 2, &opts).unwrap(), 0.0);
        assert!(delta_k_numeric(&hs, &x, &Vector::zeros(3), 2, &opts).is_err());
    }
}
