use hesse_hg::continuation::*;
use hesse_hg::params::HgParams;
use hesse_hg::series::Truncation;
use hesse_hg::weyl;
use hesse_hg::scalar::q;
use num_complex::Complex64 as C;

fn main() {
    let p = HgParams::defaults();
    let (l1, l2) = weyl::system_operators(&p);
    let gb = weyl::groebner(&[l1, l2], weyl::GbLimits::default()).unwrap();
    let std = weyl::standard_monomials(&gb).unwrap();
    let pf = weyl::pfaffian(&gb, &std).unwrap();
    let x0 = (C::new(0.1, 0.0), C::new(0.05, 0.0));

    // 1. Phi0 truncation: n_max 72 vs 96
    let t72 = Truncation { n_max: 72, tail_tol: 0.0 };
    let t96 = Truncation { n_max: 96, tail_tol: 0.0 };
    let a = initial_fundamental_matrix(&p, &pf, x0, t72).unwrap();
    let b = initial_fundamental_matrix(&p, &pf, x0, t96).unwrap();
    let mut worst = 0.0f64;
    for i in 0..9 { for j in 0..9 {
        let rel = (a[(i,j)] - b[(i,j)]).norm() / b[(i,j)].norm().max(1e-30);
        if rel > worst { worst = rel; }
    }}
    println!("phi0 truncation 72 vs 96 worst relative: {:.3e}", worst);

    // 2. P-entry f64 evaluation vs exact rational at a detour point
    let r1c = p1_coordinate(0.1, 0.05).unwrap();
    let rr = r1c - 0.05; // closest real approach
    let xq = [q((rr*1e6) as i64, 10_000_000), q((rr*1e6) as i64, 20_000_000)];
    let xc = [C::new(hesse_hg::scalar::q_to_f64(&xq[0]), 0.0), C::new(hesse_hg::scalar::q_to_f64(&xq[1]), 0.0)];
    let mut worst = 0.0f64;
    for var in 0..2 {
        for i in 0..9 { for j in 0..9 {
            let e = &pf.p[var][i][j];
            if e.is_zero() { continue; }
            let exact = e.eval_q(&xq).unwrap();
            let ex = hesse_hg::scalar::q_to_f64(&exact);
            let fl = e.eval_c64(&xc).re;
            let rel = (fl - ex).abs() / ex.abs().max(1e-30);
            if rel > worst { worst = rel; }
        }}
    }
    println!("P-entry f64 vs exact worst relative: {:.3e}", worst);

    // 3. Transport tolerance sensitivity on m3num
    let cpf = CompiledPfaffian::new(&pf);
    let (_, _, rho3) = build_loops(0.1, 0.05, 0.05).unwrap();
    let phi0 = b;
    let m_a = numeric_circuit_matrix(&phi0, &transport(&cpf, &rho3, &phi0, 1e-11).unwrap().end).unwrap();
    let m_b = numeric_circuit_matrix(&phi0, &transport(&cpf, &rho3, &phi0, 1e-13).unwrap().end).unwrap();
    println!("m3num tol 1e-11 vs 1e-13 diff: {:.3e}", m_a.max_abs_diff(&m_b));

    // 4. Phi0 n_max sensitivity on m3num
    let phi72 = a;
    let m_c = numeric_circuit_matrix(&phi72, &transport(&cpf, &rho3, &phi72, 1e-13).unwrap().end).unwrap();
    println!("m3num phi(72) vs phi(96) diff: {:.3e}", m_b.max_abs_diff(&m_c));

    // 5. delta-doubling homotopy sensitivity
    let (_, _, rho3b) = build_loops(0.1, 0.05, 0.1).unwrap();
    let m_d = numeric_circuit_matrix(&phi0, &transport(&cpf, &rho3b, &phi0, 1e-13).unwrap().end).unwrap();
    println!("m3num delta 0.05 vs 0.10 diff: {:.3e}", m_b.max_abs_diff(&m_d));
}
