//! Quarter-turn rotation matrix d^j(π/2) from the two-sided recursion,
//! with its orthogonality defect at growing j.

use coupled_tops::spin::{wigner_d_half_pi, SpinQuantum};

fn main() {
    let d = wigner_d_half_pi(SpinQuantum::from_two_j(2));
    println!("d^1(π/2):\n{}", d.matrix());
    for two_j in [10, 40, 100, 160, 400] {
        let d = wigner_d_half_pi(SpinQuantum::from_two_j(two_j));
        println!(
            "j = {:>5}: max |dᵀd − I| = {:.1e}",
            two_j as f64 / 2.0,
            d.orthogonality_error()
        );
    }
}
