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
    let (_, _, rho3) = build_loops(0.1, 0.05, 0.05).unwrap();

    let mut prev: Option<CMat> = None;
    for tol in [1e-10, 1e-11, 1e-12, 1e-13, 3e-14] {
        let tr = transport(&cpf, &rho3, &c2, tol).unwrap();
        let m = numeric_circuit_matrix(&c2, &tr.end).unwrap();
        let d = prev.as_ref().map(|p| m.max_abs_diff(p)).unwrap_or(f64::NAN);
        println!("tol {tol:.0e}: steps {}, diff from prev {:.3e}, gauge {:.3e}",
            tr.steps, d, gauge_compare_m3(&m, &p.exp()).unwrap());
        prev = Some(m);
    }
    // per-leg reversibility at 1e-13
    for (i, seg) in rho3.segments.iter().enumerate() {
        let leg = LoopPath { segments: vec![seg.clone()], base: rho3.base, label: format!("leg{i}") };
        let fw = transport(&cpf, &leg, &c2, 1e-13).unwrap();
        let bk = transport(&cpf, &leg.reversed(), &fw.end, 1e-13).unwrap();
        println!("leg {i}: fw steps {}, roundtrip dev {:.3e}", fw.steps, bk.end.max_abs_diff(&c2));
    }
}
