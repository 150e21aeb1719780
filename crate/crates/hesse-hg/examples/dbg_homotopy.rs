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
    let n = 9;
    let cs: Vec<f64> = (0..n).map(|j| (0..n).map(|i| phi0[(i,j)].norm()).fold(0.0f64, f64::max)).collect();
    let c2 = CMat::from_fn(n, |i,j| phi0[(i,j)] / cs[j]);
    let cpf = CompiledPfaffian::new(&pf);

    let m3_at_delta = |d: f64| -> CMat {
        let (_, _, rho3) = build_loops(0.1, 0.05, d).unwrap();
        numeric_circuit_matrix(&c2, &transport(&cpf, &rho3, &c2, 1e-13).unwrap().end).unwrap()
    };
    let m_05 = m3_at_delta(0.05);
    let m_10 = m3_at_delta(0.10);
    let m_20 = m3_at_delta(0.18);
    println!("delta 0.05 vs 0.10: {:.3e}", m_05.max_abs_diff(&m_10));
    println!("delta 0.10 vs 0.18: {:.3e}", m_10.max_abs_diff(&m_20));

    // numeric Artin with numeric m2
    let (_, r2l, _) = build_loops(0.1, 0.05, 0.05).unwrap();
    let m2n = numeric_circuit_matrix(&c2, &transport(&cpf, &r2l, &c2, 1e-13).unwrap().end).unwrap();
    let pow3 = |m: &CMat| m.mul(m).mul(m);
    let a = pow3(&m2n.mul(&m_05));
    let b = pow3(&m_05.mul(&m2n));
    println!("numeric Artin23 residual: {:.3e}", a.max_abs_diff(&b));

    // det and row eigenvector of numeric m3
    let e = p.exp();
    let lam = hesse_hg::monodromy::lambda(&e);
    println!("det(m3num) - lam: {:.3e}", (m_05.det() - lam).norm());

    // compare gauged closed both ways: gauge numeric vs closed
    println!("gauge gap (0.05): {:.3e}", gauge_compare_m3(&m_05, &e).unwrap());
    println!("gauge gap (0.10): {:.3e}", gauge_compare_m3(&m_10, &e).unwrap());
    println!("gauge gap (0.18): {:.3e}", gauge_compare_m3(&m_20, &e).unwrap());
}
