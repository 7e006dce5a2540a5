use fraccalc::operators::*;
use nalgebra::DMatrix;

fn main() {
    // T = 0, alpha 0.7, s = 0.4: series sum must be exactly x
    let op = LinOp::dense(DMatrix::zeros(5, 5)).unwrap();
    let x = op.random_probe(8);
    let y = fraccalc::funcalc::fractional_power(&op, 0.4, &x, 0.7, &fraccalc::funcalc::SolveOptions::default()).unwrap();
    println!("err = {:.3e}", (&y.entries - &x.entries).norm());

    // raw scalar check: sum c_n k^a(n) partial sums + ladder manually
    let (s, alpha) = (0.4f64, 0.7f64);
    let n_max = 16384usize;
    let mut kw = vec![1.0f64];
    for i in 1..=n_max { let f = i as f64; let p = kw[i-1]; kw.push(p * (f + alpha - 1.0)/f); }
    let lg = |x: f64| fraccalc::special::log_gamma(x).unwrap();
    let mut c = vec![(lg(s+alpha+1.0)-lg(1.0+s)-lg(1.0+alpha)).exp()];
    let c1 = (lg(1.0+s+alpha)+lg(1.0-s)-lg(1.0+s)-lg(alpha+2.0)).exp() / fraccalc::special::gamma_signed(-s).unwrap();
    c.push(c1);
    for n in 1..n_max { let nf = n as f64; let p = c[n]; c.push(p*(nf-s)/(nf+alpha+1.0)); }
    let partial = |upto: usize| -> f64 { (0..=upto).map(|n| c[n]*kw[n]).sum() };
    let (s8, s4, s2, s1) = (partial(2048), partial(4096), partial(8192), partial(16384));
    println!("partials: {s8:.10} {s4:.10} {s2:.10} {s1:.10} (target 1)");
    let p_tail = (-s - alpha - 1.0) + (alpha - 1.0) + 1.0;
    println!("p_tail = {p_tail}");
    let step = |a: f64, b: f64, p: f64| b + (b - a) * 2f64.powf(p)/(1.0 - 2f64.powf(p));
    let e1 = step(s8, s4, p_tail); let e2 = step(s4, s2, p_tail); let e3 = step(s2, s1, p_tail);
    let f1 = step(e1, e2, p_tail-1.0); let f2 = step(e2, e3, p_tail-1.0);
    let out = step(f1, f2, p_tail-2.0);
    println!("ladder4 scalar: {out:.15}  (err {:.3e})", (out-1.0).abs());
}
