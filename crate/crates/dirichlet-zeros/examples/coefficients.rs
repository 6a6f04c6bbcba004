//! The expansion coefficients c_n: exact polynomials in the Stieltjes
//! constants (over the rationals, divided by pi) next to their numeric
//! values.
//!
//!     cargo run --release --example coefficients

use dirichlet_zeros::series::{derive_a_series, derive_expansion_coefficients};
use dirichlet_zeros::zeta::cached_stieltjes;

fn main() {
    let table = cached_stieltjes();
    println!("Stieltjes constants (cached, precision {:.1e}):", table.precision);
    for (n, g) in table.values.iter().enumerate() {
        println!("  gamma_{n:<2} = {g:+.15}");
    }
    println!();

    let order = 8;
    let a = derive_a_series(table, order).expect("pipeline");
    let coeffs = derive_expansion_coefficients(&a, order).expect("pipeline");
    println!("E N(T, inf) = (1/2pi) log(1/(T-1/2)) + c0 + sum c_n (T-1/2)^n, with:");
    for n in 2..=order {
        println!("  c_{n} = {:+.12}", coeffs.c(n));
        println!("      = {}", coeffs.pn_symbolic[n - 2].format_over_pi());
    }
}
