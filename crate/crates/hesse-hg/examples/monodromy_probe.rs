use hesse_hg::cmat::CMat;
use hesse_hg::continuation::*;
use hesse_hg::monodromy;
use hesse_hg::params::HgParams;
use hesse_hg::series::Truncation;
use hesse_hg::weyl;
use num_complex::Complex64 as C;
use std::time::Instant;

fn main() {
    let p = HgParams::defaults();
    let e = p.exp();
    let t = Truncation { n_max: 72, tail_tol: 0.0 };
    let t0 = Instant::now();
    let (l1, l2) = weyl::system_operators(&p);
    let gb = weyl::groebner(&[l1, l2], weyl::GbLimits::default()).unwrap();
    let std = weyl::standard_monomials(&gb).unwrap();
    let pf = weyl::pfaffian(&gb, &std).unwrap();
    println!("system built in {:?}", t0.elapsed());

    let x0 = (C::new(0.1, 0.0), C::new(0.05, 0.0));
    let t1 = Instant::now();
    let phi0 = initial_fundamental_matrix(&p, &pf, x0, t).unwrap();
    println!("phi0 in {:?}, cond = {:.3e}", t1.elapsed(), phi0.cond_inf());

    // Column residual check
    use hesse_hg::fundamental::SolutionLabel;
    let res = column_pfaffian_residual(&p, &pf, SolutionLabel(0,0), x0, t, 1e-5).unwrap();
    println!("column (0,0) residual: {:.3e}", res);

    let cpf = CompiledPfaffian::new(&pf);
    let (r1, r2, r3) = build_loops(0.1, 0.05, 0.05).unwrap();
    for (rho, closed, name) in [
        (&r1, monodromy::m1(&e).mat, "r1"),
        (&r2, monodromy::m2(&e).mat, "r2"),
    ] {
        let t2 = Instant::now();
        let tr = transport(&cpf, rho, &phi0, 1e-12).unwrap();
        let mnum = numeric_circuit_matrix(&phi0, &tr.end).unwrap();
        println!("{name}: {} steps in {:?}, |M - closed| = {:.3e}",
            tr.steps, t2.elapsed(), mnum.max_abs_diff(&closed));
    }
    let t2 = Instant::now();
    let tr = transport(&cpf, &r3, &phi0, 1e-12).unwrap();
    let m3num = numeric_circuit_matrix(&phi0, &tr.end).unwrap();
    println!("r3: {} steps in {:?}", tr.steps, t2.elapsed());
    let lam = monodromy::lambda(&e);
    let eigs = m3num.eigenvalues();
    let close1 = eigs.iter().filter(|ev| (*ev - C::new(1.0,0.0)).norm() < 1e-5).count();
    let closel = eigs.iter().map(|ev| (ev - lam).norm()).fold(f64::INFINITY, f64::min);
    println!("r3 eig: {} near 1, dist to lambda = {:.3e}", close1, closel);
    let gap = gauge_compare_m3(&m3num, &e).unwrap();
    println!("gauge-normalized gap vs closed form: {:.3e}", gap);

    // round trip
    let tr_back = transport(&cpf, &r3.reversed(), &tr.end, 1e-12).unwrap();
    println!("round-trip deviation: {:.3e}", tr_back.end.max_abs_diff(&phi0) / phi0.max_abs());

    // self-consistency of gauge compare: closed form against itself
    let self_gap = gauge_compare_m3(&monodromy::m3(&e).unwrap().mat, &e).unwrap();
    println!("self gauge gap: {:.3e}", self_gap);
    println!("total {:?}", t0.elapsed());
}
