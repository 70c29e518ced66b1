//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Slow but simple and unconditionally accurate; used as the reference
//! against which the production solver is checked.

use nalgebra::DMatrix;

use crate::C64;

/// Eigenvalues (descending) and the matching eigenvectors as columns.
pub fn jacobi_hermitian(a: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix required");
    let mut a = a.clone();
    let mut v = DMatrix::<C64>::identity(n, n);
    let scale = a
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|q| (0..q).map(move |p| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-16 * scale {
            break;
        }
        for q in 1..n {
            for p in 0..q {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // make a_pq real and positive
                let phase = apq / mag;
                for r in 0..n {
                    a[(q, r)] *= phase;
                }
                for r in 0..n {
                    a[(r, q)] *= phase.conj();
                    v[(r, q)] *= phase.conj();
                }
                let apq = a[(p, q)].re;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    let (arp, arq) = (a[(r, p)], a[(r, q)]);
                    a[(r, p)] = arp * c - arq * s;
                    a[(r, q)] = arp * s + arq * c;
                    let (vrp, vrq) = (v[(r, p)], v[(r, q)]);
                    v[(r, p)] = vrp * c - vrq * s;
                    v[(r, q)] = vrp * s + vrq * c;
                }
                for r in 0..n {
                    let (apr, aqr) = (a[(p, r)], a[(q, r)]);
                    a[(p, r)] = apr * c - aqr * s;
                    a[(q, r)] = apr * s + aqr * c;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}
