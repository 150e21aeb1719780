use hesse_hg::cmat::CMat;
use hesse_hg::continuation::*;
use hesse_hg::monodromy;
use hesse_hg::params::HgParams;
use hesse_hg::series::Truncation;
use hesse_hg::weyl;
use num_complex::Complex64 as C;

fn main() {
    let p = HgParams::defaults();
    let e = p.exp();
    let t = Truncation { n_max: 72, tail_tol: 0.0 };
    let (l1, l2) = weyl::system_operators(&p);
    let gb = weyl::groebner(&[l1, l2], weyl::GbLimits::default()).unwrap();
    let std = weyl::standard_monomials(&gb).unwrap();
    let pf = weyl::pfaffian(&gb, &std).unwrap();
    let x0 = (C::new(0.1, 0.0), C::new(0.05, 0.0));
    let phi0 = initial_fundamental_matrix(&p, &pf, x0, t).unwrap();
    let cpf = CompiledPfaffian::new(&pf);
    let (_, _, r3) = build_loops(0.1, 0.05, 0.05).unwrap();
    let tr = transport(&cpf, &r3, &phi0, 1e-12).unwrap();
    let m3num = numeric_circuit_matrix(&phi0, &tr.end).unwrap();

    let lam = monodromy::lambda(&e);
    let v = m3num.transpose().eigenvector_for(lam).unwrap();
    let vm: Vec<f64> = v.iter().map(|z| z.norm()).collect();
    println!("|v| range: {:.3e} .. {:.3e}", vm.iter().cloned().fold(f64::INFINITY, f64::min), vm.iter().cloned().fold(0.0, f64::max));
    // residual of the left-eigen equation
    let vml = m3num.vecmat(&v);
    let res: f64 = vml.iter().zip(&v).map(|(a,b)| (a - lam*b).norm()).sum::<f64>();
    println!("left eig residual: {:.3e}", res);
    // theoretical v from closed normalization: compare gauged matrices entrywise
    let d = CMat::diag(&v);
    let dinv = CMat::diag(&v.iter().map(|z| 1.0/z).collect::<Vec<_>>());
    let gauged = d.mul(&m3num).mul(&dinv);
    let closed = monodromy::m3(&e).unwrap().mat;
    let mut worst = (0usize, 0usize, 0.0f64);
    for i in 0..9 { for j in 0..9 {
        let d = (gauged[(i,j)] - closed[(i,j)]).norm();
        if d > worst.2 { worst = (i, j, d); }
    }}
    println!("worst entry ({},{}): {:.3e}; gauged {:?} closed {:?}", worst.0, worst.1, worst.2, gauged[(worst.0,worst.1)], closed[(worst.0,worst.1)]);
    // how close is raw m3num to a rank-one update? check 1-eigenspace dim etc.
    // difference matrix norm overall
    println!("max |gauged - closed| = {:.3e}", gauged.max_abs_diff(&closed));
    // try: direct residual of m3num against D^-1 closed D (inverse direction)
    let back = dinv.mul(&closed).mul(&d);
    println!("max |m3num - D^-1 closed D| = {:.3e}", m3num.max_abs_diff(&back));
}
