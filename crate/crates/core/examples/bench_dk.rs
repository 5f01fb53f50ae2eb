// quick scratch benchmark for delta_k accuracy/speed
use finsler_core::geometry::{point, Domain, Vector};
use finsler_core::metrics::{delta_k_numeric, half_space_qk_closed_form, q_from_delta, DeltaKOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (d, k) in [(3usize, 2usize), (4, 2), (4, 3)] {
        let hs = Domain::half_space_x1(d);
        let n = 150;
        for opts_name in ["fast", "default"] {
            let t0 = Instant::now();
            let mut worst: f64 = 0.0;
            for s in 0..n {
                let mut x = Vector::zeros(d);
                x[0] = rng.gen_range(0.05..2.0);
                for i in 1..d { x[i] = rng.gen_range(-2.0..2.0); }
                let mut v = Vector::from_fn(d, |_, _| rng.gen_range(-1.0f64..1.0));
                if v[0].abs() < 1e-6 { v[0] = 1e-3; }
                let opts = if opts_name == "fast" { DeltaKOptions::fast(s as u64) } else { DeltaKOptions::default().with_seed(s as u64) };
                let out = delta_k_numeric(&hs, &x, &v, k, &opts).unwrap();
                let q_num = q_from_delta(&v, out.value);
                let q_exact = half_space_qk_closed_form(&x, &v, k).unwrap();
                let rel = (q_num - q_exact).abs() / q_exact.abs().max(1e-300);
                if rel > worst { worst = rel; }
            }
            let dt = t0.elapsed().as_secs_f64();
            println!("hs d={d} k={k} {opts_name}: worst rel={worst:.2e}  {:.2} ms/call", dt*1000.0/n as f64);
        }
    }
    // ball equality
    let ball = Domain::unit_ball(3);
    let n = 150;
    for opts_name in ["fast", "default"] {
        let t0 = Instant::now();
        let mut worst: f64 = 0.0;
        for s in 0..n {
            let mut x;
            loop {
                x = Vector::from_fn(3, |_, _| rng.gen_range(-1.0f64..1.0));
                if x.norm() < 0.95 { break; }
            }
            let v = Vector::from_fn(3, |_, _| rng.gen_range(-1.0f64..1.0));
            if v.norm() < 1e-6 { continue; }
            let opts = if opts_name == "fast" { DeltaKOptions::fast(s as u64) } else { DeltaKOptions::default().with_seed(s as u64) };
            let out = delta_k_numeric(&ball, &x, &v, 2, &opts).unwrap();
            let exact = ball.line_boundary_distance(&x, &v).unwrap();
            let rel = (out.value - exact).abs() / exact;
            if rel > worst { worst = rel; }
        }
        let dt = t0.elapsed().as_secs_f64();
        println!("ball d=3 k=2 {opts_name}: worst rel={worst:.2e}  {:.2} ms/call", dt*1000.0/n as f64);
    }
}
