use hesse_hg::cmat::CMat;
use hesse_hg::continuation::*;
use hesse_hg::params::HgParams;
use hesse_hg::series::Truncation;
use hesse_hg::weyl;
use num_complex::Complex64 as C;

fn main() {
    let p = HgParams::defaults();
    let t = Truncation { n_max: 80, tail_tol: 0.0 };
    let (l1, l2) = weyl::system_operators(&p);
    let gb = weyl::groebner(&[l1, l2], weyl::GbLimits::default()).unwrap();
    let std = weyl::standard_monomials(&gb).unwrap();
    let pf = weyl::pfaffian(&gb, &std).unwrap();
    let x0 = (C::new(0.1, 0.0), C::new(0.05, 0.0));
    let phi0 = initial_fundamental_matrix(&p, &pf, x0, t).unwrap();
    println!("raw cond: {:.3e}", phi0.cond_inf());
    let n = 9;
    let rs: Vec<f64> = (0..n).map(|i| (0..n).map(|j| phi0[(i,j)].norm()).fold(0.0f64, f64::max)).collect();
    let r = CMat::from_fn(n, |i,j| phi0[(i,j)] / rs[i]);
    println!("row-equilibrated cond: {:.3e}", r.cond_inf());
    let cs: Vec<f64> = (0..n).map(|j| (0..n).map(|i| r[(i,j)].norm()).fold(0.0f64, f64::max)).collect();
    let rc = CMat::from_fn(n, |i,j| r[(i,j)] / cs[j]);
    println!("row+col-equilibrated cond: {:.3e}", rc.cond_inf());
    // column-only
    let cs2: Vec<f64> = (0..n).map(|j| (0..n).map(|i| phi0[(i,j)].norm()).fold(0.0f64, f64::max)).collect();
    let c2 = CMat::from_fn(n, |i,j| phi0[(i,j)] / cs2[j]);
    println!("col-equilibrated cond: {:.3e}", c2.cond_inf());
    // col scales
    println!("col maxima: {:?}", cs2.iter().map(|v| format!("{:.2e}", v)).collect::<Vec<_>>());
    // pipeline test: column-normalized phi0 through rho3
    let cpf = CompiledPfaffian::new(&pf);
    let (_, _, rho3) = build_loops(0.1, 0.05, 0.05).unwrap();
    let m_a = numeric_circuit_matrix(&c2, &transport(&cpf, &rho3, &c2, 1e-12).unwrap().end).unwrap();
    let m_b = numeric_circuit_matrix(&c2, &transport(&cpf, &rho3, &c2, 1e-13).unwrap().end).unwrap();
    println!("conjugated m3num tol sensitivity: {:.3e}", m_a.max_abs_diff(&m_b));
    let e = p.exp();
    let gap = gauge_compare_m3(&m_b, &e).unwrap();
    println!("gauge gap with column-normalized basis: {:.3e}", gap);
    let (r1l, r2l, _) = build_loops(0.1, 0.05, 0.05).unwrap();
    let m1n = numeric_circuit_matrix(&c2, &transport(&cpf, &r1l, &c2, 1e-12).unwrap().end).unwrap();
    println!("r1 vs closed: {:.3e}", m1n.max_abs_diff(&hesse_hg::monodromy::m1(&e).mat));
    let m2n = numeric_circuit_matrix(&c2, &transport(&cpf, &r2l, &c2, 1e-12).unwrap().end).unwrap();
    println!("r2 vs closed: {:.3e}", m2n.max_abs_diff(&hesse_hg::monodromy::m2(&e).mat));
}
