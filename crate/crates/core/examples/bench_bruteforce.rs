// optimizer vs dense brute-force slice sampling on generic domains (d=3, k=2)
use finsler_core::geometry::{orthonormal_completion, point, unit, Domain, Vector};
use finsler_core::metrics::{delta_k_numeric, DeltaKOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// dense 1-parameter family: planes through v_hat indexed by rotation of the
// second spanning vector in v_hat-perp; inner min by dense circle sampling + refine
fn brute_force_delta2(domain: &Domain, x: &Vector, v: &Vector, planes: usize, dirs: usize) -> f64 {
    let v_hat = unit(v).unwrap();
    let basis = orthonormal_completion(&v_hat);
    let (b1, b2) = (&basis[1], &basis[2]);
    let mut best = f64::NEG_INFINITY;
    for i in 0..planes {
        let a = std::f64::consts::PI * i as f64 / planes as f64;
        let w = a.cos() * b1 + a.sin() * b2;
        let mut inner = f64::INFINITY;
        let mut inner_phi = 0.0;
        for j in 0..dirs {
            let phi = std::f64::consts::TAU * j as f64 / dirs as f64;
            let u = phi.cos() * &v_hat + phi.sin() * &w;
            let t = domain.ray_boundary_distance(x, &u).unwrap();
            if t < inner { inner = t; inner_phi = phi; }
        }
        // parabolic-ish polish: ternary search around inner_phi
        let eval = |phi: f64| { let u = phi.cos() * &v_hat + phi.sin() * &w; domain.ray_boundary_distance(x, &u).unwrap() };
        let (mut lo, mut hi) = (inner_phi - std::f64::consts::TAU / dirs as f64, inner_phi + std::f64::consts::TAU / dirs as f64);
        for _ in 0..60 {
            let m1 = lo + (hi - lo) / 3.0; let m2 = hi - (hi - lo) / 3.0;
            if eval(m1) < eval(m2) { hi = m2 } else { lo = m1 }
        }
        inner = inner.min(eval(0.5 * (lo + hi)));
        if inner > best { best = inner; }
    }
    best
}

fn main() {
    let ell = Domain::ellipsoid_from_semi_axes(Vector::zeros(3), &[1.0, 1.0, 0.5]).unwrap();
    let cube = Domain::cube(3, 0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, domain) in [("ellipsoid", &ell), ("cube", &cube)] {
        let mut worst: f64 = 0.0;
        let mut worst_default: f64 = 0.0;
        let t0 = std::time::Instant::now();
        for s in 0..30 {
            let x = loop {
                let c = Vector::from_fn(3, |_, _| rng.gen_range(-1.0f64..1.0));
                if domain.contains(&c).unwrap() { break c; }
            };
            let v = Vector::from_fn(3, |_, _| rng.gen_range(-1.0f64..1.0));
            if v.norm() < 1e-9 { continue; }
            let bf = brute_force_delta2(domain, &x, &v, 800, 256);
            let opt = delta_k_numeric(domain, &x, &v, 2, &DeltaKOptions::fast(s)).unwrap();
            let rel = (opt.value - bf) / bf;
            if rel.abs() > worst.abs() { worst = rel; }
            let opt_d = delta_k_numeric(domain, &x, &v, 2, &DeltaKOptions::default().with_seed(s)).unwrap();
            let rel_d = (opt_d.value - bf) / bf;
            if rel_d.abs() > worst_default.abs() { worst_default = rel_d; }
        }
        println!("{name}: signed worst fast={worst:+.3e} default={worst_default:+.3e} ({:.1}s)", t0.elapsed().as_secs_f64());
    }
    // the witness configuration: near-boundary point, tangential v
    let x = point(&[0.9, 0.0, 0.0]);
    let v = point(&[0.0, 1.0, 0.0]);
    let d1 = ell.line_boundary_distance(&x, &v).unwrap();
    let bf = brute_force_delta2(&ell, &x, &v, 2000, 512);
    let opt = delta_k_numeric(&ell, &x, &v, 2, &DeltaKOptions::default()).unwrap();
    println!("witness ellipsoid: delta1={d1:.6} delta2_bf={bf:.6} delta2_opt={:.6} gap={:.1}%", opt.value, 100.0*(d1-bf)/d1);
    let xc = point(&[0.0, 0.0, 0.0]);
    let vd = point(&[1.0, 1.0, 1.0]);
    let d1c = cube.line_boundary_distance(&xc, &vd).unwrap();
    let bfc = brute_force_delta2(&cube, &xc, &vd, 2000, 512);
    let optc = delta_k_numeric(&cube, &xc, &vd, 2, &DeltaKOptions::default()).unwrap();
    println!("witness cube: delta1={d1c:.6} delta2_bf={bfc:.6} delta2_opt={:.6} gap={:.1}%", optc.value, 100.0*(d1c-bfc)/d1c);
}
