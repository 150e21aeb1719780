use hesse_hg::continuation::*;
use hesse_hg::params::HgParams;
use hesse_hg::series::Truncation;
use hesse_hg::weyl;
use num_complex::Complex64 as C;

fn main() {
    let p = HgParams::defaults();
    let t = Truncation { n_max: 72, tail_tol: 0.0 };
    let (l1, l2) = weyl::system_operators(&p);
    let gb = weyl::groebner(&[l1, l2], weyl::GbLimits::default()).unwrap();
    let std = weyl::standard_monomials(&gb).unwrap();
    let pf = weyl::pfaffian(&gb, &std).unwrap();
    println!("pf.size() = {}", pf.size());
    let x0 = (C::new(0.1, 0.0), C::new(0.05, 0.0));
    let phi0 = initial_fundamental_matrix(&p, &pf, x0, t).unwrap();
    println!("phi0.n = {}", phi0.n);
    for row in 0..pf.size() {
        for col in 0..3 {
            print!("{:+.4e} ", phi0[(row, col)].re);
        }
        println!();
    }
    println!("norm_inf = {:e}", phi0.norm_inf());
    println!("det = {:?}", phi0.det());
}
