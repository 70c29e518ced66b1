//! Random-matrix saturation values and the analytic linear-entropy curve,
//! exact sums against the continuum closed form.

use coupled_tops::rmt::{
    p_epsilon_closed, p_epsilon_exact, p_epsilon_printed, predictions, sr_curve, sr_weak_rate, SrMode,
};
use coupled_tops::spin::SpinQuantum;

fn main() -> coupled_tops::Result<()> {
    let spin = SpinQuantum::from_two_j(160);
    let n = spin.dim();
    println!("{:#?}", predictions(n)?);
    for eps in [1e-4, 1e-3, 1e-2] {
        println!(
            "ε = {eps:e}: p exact {:.6}, closed {:.6}, printed {:.6}; weak rate {:.3e}",
            p_epsilon_exact(spin, eps),
            p_epsilon_closed(n, eps),
            p_epsilon_printed(n, eps),
            sr_weak_rate(spin, eps)
        );
        let exact = sr_curve(1000, spin, eps, SrMode::ExactSum);
        let closed = sr_curve(1000, spin, eps, SrMode::ClosedForm);
        for step in [1, 10, 100, 1000] {
            println!(
                "    S_R({step:>4}) exact {:.5} closed {:.5}",
                exact[step - 1],
                closed[step - 1]
            );
        }
    }
    Ok(())
}
