use super::{identity, HermitianMatrix, SpectralDecomposition, C64};
use crate::error::{Error, Result};

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// the classical real rotation, so the iterate stays exactly Hermitian. A pair
/// is skipped once `|a_pq|` is negligible against `sqrt(|a_pp a_qq|)` (which
/// keeps small eigenvalues of definite matrices relatively accurate) or against
/// the Frobenius norm. The solver stops after a sweep with no rotation and
/// gives up after `100·n²` rotations.
pub fn eig_hermitian(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let mut a = h.matrix().clone();
    let mut v = identity(n);
    let scale = h.frobenius_norm();
    let budget = 100 * n * n;
    let mut rotations = 0usize;

    if n > 1 && scale > 0.0 {
        loop {
            let mut rotated = false;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    let g = apq.norm();
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    if g == 0.0 || g <= 0.25 * f64::EPSILON * (app.abs() * aqq.abs()).sqrt() || g <= 1e-30 * scale {
                        continue;
                    }
                    if rotations == budget {
                        return Err(Error::NoConvergence(budget));
                    }
                    rotations += 1;
                    rotated = true;

                    let theta = (aqq - app) / (2.0 * g);
                    let t = if theta.abs() > 1e150 {
                        0.5 / theta
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    let phase = (apq / g).conj();
                    // J restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                    let j00 = C64::new(c, 0.0);
                    let j01 = C64::new(s, 0.0);
                    let j10 = phase * (-s);
                    let j11 = phase * c;

                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * j00 + akq * j10;
                        a[(k, q)] = akp * j01 + akq * j11;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = j00.conj() * apk + j10.conj() * aqk;
                        a[(q, k)] = j01.conj() * apk + j11.conj() * aqk;
                    }
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    a[(p, p)] = C64::new(app - t * g, 0.0);
                    a[(q, q)] = C64::new(aqq + t * g, 0.0);

                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * j00 + vkq * j10;
                        v[(k, q)] = vkp * j01 + vkq * j11;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = super::CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius, random_hermitian, random_unitary, seeded_rng, CMatrix};

    fn check_invariants(h: &HermitianMatrix, e: &SpectralDecomposition) {
        let n = h.dim();
        for w in e.eigenvalues.windows(2) {
            assert!(w[0] >= w[1]);
        }
        let recon = e.reconstruct();
        let err = frobenius(&(recon.matrix() - h.matrix()));
        assert!(err <= 1e-10 * (1.0 + h.frobenius_norm()), "reconstruction {err:e}");
        let u = &e.eigenvectors;
        let gram = u.adjoint() * u - CMatrix::identity(n, n);
        assert!(frobenius(&gram) <= 1e-10 * n as f64);
    }

    #[test]
    fn identity_spectrum() {
        let e = eig_hermitian(&HermitianMatrix::identity(3)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_is_sorted() {
        let e = eig_hermitian(&HermitianMatrix::diag(&[1.0, 20.0, 40.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![40.0, 20.0, 1.0]);
    }

    #[test]
    fn two_by_two_matches_quadratic_formula() {
        let mut rng = seeded_rng(11, 0);
        for _ in 0..50 {
            let h = random_hermitian(&mut rng, 2);
            let m = h.matrix();
            let (p, q) = (m[(0, 0)].re, m[(1, 1)].re);
            let off = m[(0, 1)].norm_sqr();
            let mid = 0.5 * (p + q);
            let rad = (0.25 * (p - q) * (p - q) + off).sqrt();
            let e = eig_hermitian(&h).unwrap();
            assert!((e.eigenvalues[0] - (mid + rad)).abs() < 1e-13 * (1.0 + rad + mid.abs()));
            assert!((e.eigenvalues[1] - (mid - rad)).abs() < 1e-13 * (1.0 + rad + mid.abs()));
            check_invariants(&h, &e);
        }
    }

    #[test]
    fn agrees_with_nalgebra_and_is_unitarily_invariant() {
        let mut rng = seeded_rng(5, 0);
        for n in 1..=16 {
            let h = random_hermitian(&mut rng, n);
            let e = eig_hermitian(&h).unwrap();
            check_invariants(&h, &e);

            let mut reference: Vec<f64> = h.matrix().clone().symmetric_eigenvalues().iter().copied().collect();
            reference.sort_by(|a, b| b.total_cmp(a));
            for (x, y) in e.eigenvalues.iter().zip(&reference) {
                assert!((x - y).abs() < 1e-11 * (1.0 + h.frobenius_norm()));
            }

            let u = random_unitary(&mut rng, n);
            let conj = HermitianMatrix::hermitian_part(&u * h.matrix() * u.adjoint());
            let e2 = eig_hermitian(&conj).unwrap();
            for (x, y) in e.eigenvalues.iter().zip(&e2.eigenvalues) {
                assert!((x - y).abs() <= 1e-9 * h.frobenius_norm());
            }
        }
    }

    #[test]
    fn zero_and_degenerate_inputs() {
        let e = eig_hermitian(&HermitianMatrix::zeros(4)).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 4]);
        // rank one: all-ones
        let ones = HermitianMatrix::hermitian_part(CMatrix::from_element(4, 4, C64::new(1.0, 0.0)));
        let e = eig_hermitian(&ones).unwrap();
        assert!((e.eigenvalues[0] - 4.0).abs() < 1e-14);
        assert!(e.eigenvalues[1..].iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn small_eigenvalues_keep_relative_accuracy() {
        let mut rng = seeded_rng(3, 0);
        let u = random_unitary(&mut rng, 5);
        let lams = [1.0, 1e-2, 1e-4, 1e-6, 1e-8];
        let d = HermitianMatrix::diag(&lams);
        let h = HermitianMatrix::hermitian_part(&u * d.matrix() * u.adjoint());
        let e = eig_hermitian(&h).unwrap();
        for (x, y) in e.eigenvalues.iter().zip(lams) {
            assert!((x - y).abs() < 1e-14, "{x} vs {y}");
        }
    }
}
