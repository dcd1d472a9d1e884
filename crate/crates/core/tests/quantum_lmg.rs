use foucault::dos::{classical_counts, density_from_counts, peak_bin, shared_bins, EnergyBins};
use foucault::lmg::{
    build_hamiltonian, eigen_spectrum, lmg_map, quantum_dos, rescale_energy, spectrum_point, spectrum_sweep,
    LmgCase, SpectrumOptions,
};
use foucault::stationary::{critical_s0, stationary_points};
use foucault::{Exec, PendulumConfig};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg(dw: f64, w: f64) -> PendulumConfig {
    PendulumConfig::new(1.0).with_delta_omega(dw).with_rotation(w)
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Spin matrices (Sz, S+) in the basis m = -s..s.
fn spin_ops(n: u32) -> (DMatrix<f64>, DMatrix<f64>) {
    let s = 0.5 * n as f64;
    let d = n as usize + 1;
    let m = |i: usize| -s + i as f64;
    let sz = DMatrix::from_fn(d, d, |i, j| if i == j { m(i) } else { 0.0 });
    let sp = DMatrix::from_fn(d, d, |i, j| {
        if i == j + 1 {
            (s * (s + 1.0) - m(j) * (m(j) + 1.0)).sqrt()
        } else {
            0.0
        }
    });
    (sz, sp)
}

/// LMG Hamiltonian εS3 + V(S1² − S2²) + W(S1² + S2²) built from spin operators.
fn lmg_dense(n: u32, eps: f64, v: f64, w: f64) -> DMatrix<f64> {
    let (sz, sp) = spin_ops(n);
    let sm = sp.transpose();
    let diff = (&sp * &sp + &sm * &sm) * 0.5;
    let sum = (&sp * &sm + &sm * &sp) * 0.5;
    &sz * eps + diff * v + sum * w
}

/// Number of eigenvalues below x by the Sturm sequence of a symmetric tridiagonal matrix.
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut q = d[0] - x;
    let mut count = usize::from(q < 0.0);
    for i in 1..d.len() {
        let denom = if q == 0.0 { f64::EPSILON * (e[i - 1].abs() + 1e-300) } else { q };
        q = d[i] - x - e[i - 1] * e[i - 1] / denom;
        count += usize::from(q < 0.0);
    }
    count
}

fn sturm_eigenvalue(d: &[f64], e: &[f64], k: usize) -> f64 {
    let r = d.iter().map(|x| x.abs()).sum::<f64>() + 2.0 * e.iter().map(|x| x.abs()).sum::<f64>() + 1.0;
    let (mut lo, mut hi) = (-r, r);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(d, e, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn matrix_is_symmetric_and_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 1..=8u32 {
        for _ in 0..10 {
            let c = PendulumConfig::new(rng.gen_range(0.5..2.0))
                .with_delta_omega(rng.gen_range(-2.0..2.0))
                .with_rotation(rng.gen_range(-2.0..2.0));
            let h = build_hamiltonian(n, &c).unwrap();
            let dense = h.to_dense();
            for i in 0..dense.len() {
                for j in 0..dense.len() {
                    assert_eq!(dense[i][j], dense[j][i]);
                }
            }
            let m = DMatrix::from_fn(dense.len(), dense.len(), |i, j| dense[i][j]);
            let want = sorted(m.symmetric_eigenvalues().iter().copied().collect());
            let got = eigen_spectrum(&h).unwrap();
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() < 1e-10, "N={n}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn sturm_oracle_for_large_n() {
    for (n, dw, w) in [(120u32, 0.3, 0.1), (301, 5.0, -2.0), (64, 0.0, 0.7)] {
        let h = build_hamiltonian(n, &cfg(dw, w)).unwrap();
        let e = eigen_spectrum(&h).unwrap();
        let scale = e.iter().map(|x| x.abs()).fold(1.0, f64::max);
        for k in (0..e.len()).step_by(7) {
            let want = sturm_eigenvalue(&h.diag, &h.offdiag, k);
            assert!((e[k] - want).abs() < 1e-10 * scale, "N={n} k={k}: {} vs {want}", e[k]);
        }
    }
}

#[test]
fn trace_identity() {
    for (n, dw, w) in [(50u32, 3.0, 1.0), (200, 20.0, -5.0), (7, 0.4, 0.2)] {
        let c = cfg(dw, w);
        let e = eigen_spectrum(&build_hamiltonian(n, &c).unwrap()).unwrap();
        let s = 0.5 * n as f64;
        let want: f64 = (0..=n)
            .map(|i| {
                let m = -s + i as f64;
                -2.0 * w * m + 3.0 / 16.0 * m * m
            })
            .sum();
        let got: f64 = e.iter().sum();
        assert!((got / want - 1.0).abs() < 1e-10, "{got} vs {want}");
    }
}

proptest! {
    #[test]
    fn sign_flip_symmetries(n in 1u32..60, dw in -3.0f64..3.0, w in -3.0f64..3.0) {
        let base = eigen_spectrum(&build_hamiltonian(n, &cfg(dw, 0.0)).unwrap()).unwrap();
        let flipped = eigen_spectrum(&build_hamiltonian(n, &cfg(-dw, 0.0)).unwrap()).unwrap();
        let scale = base.iter().map(|x| x.abs()).fold(1.0, f64::max);
        for (a, b) in base.iter().zip(&flipped) {
            prop_assert!((a - b).abs() < 1e-10 * scale);
        }
        // Ω → −Ω is the rotation by π about S1
        let a = eigen_spectrum(&build_hamiltonian(n, &cfg(dw, w)).unwrap()).unwrap();
        let b = eigen_spectrum(&build_hamiltonian(n, &cfg(dw, -w)).unwrap()).unwrap();
        let scale = a.iter().map(|x| x.abs()).fold(1.0, f64::max);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10 * scale);
        }
    }
}

#[test]
fn diagonal_case_is_exact() {
    let e = eigen_spectrum(&build_hamiltonian(9, &cfg(0.0, 0.25)).unwrap()).unwrap();
    let want = sorted((0..=9).map(|k| k as f64 - 4.5).map(|m| -0.5 * m + 3.0 / 16.0 * m * m).collect());
    assert_eq!(e, want);
}

#[test]
fn lmg_mapping_reproduces_lmg_spectrum() {
    let n = 12;
    let d = n as usize + 1;
    // V = 0
    let (eps, w) = (0.7, -0.4);
    let map = lmg_map(eps, 0.0, w).unwrap();
    assert_eq!(map.case, LmgCase::SymmetricRotating);
    let direct = sorted(lmg_dense(n, eps, 0.0, w).symmetric_eigenvalues().iter().copied().collect());
    let pend = eigen_spectrum(&build_hamiltonian(n, &map.config()).unwrap()).unwrap();
    // the spectra differ by the constant W S²
    let s = 0.5 * n as f64;
    let shift = w * s * (s + 1.0);
    for (a, b) in direct.iter().zip(&pend) {
        assert!((a - (b + shift)).abs() < 1e-10, "{a} vs {}", b + shift);
    }
    // V = −W: relabeled axes, no shift
    let (eps, w) = (0.9, 0.3);
    let map = lmg_map(eps, -w, w).unwrap();
    assert_eq!(map.case, LmgCase::AsymmetricStatic);
    let direct = sorted(lmg_dense(n, eps, -w, w).symmetric_eigenvalues().iter().copied().collect());
    let pend = eigen_spectrum(&build_hamiltonian(n, &map.config()).unwrap()).unwrap();
    assert_eq!(direct.len(), d);
    for (a, b) in direct.iter().zip(&pend) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}

#[test]
fn lmg_critical_radii() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let eps: f64 = rng.gen_range(-3.0..3.0);
        let w: f64 = rng.gen_range(0.05..2.0);
        // V = 0 with W < 0: the substitution gives 16|Ω|/(3ω) = |ε/(2W)|,
        // half the |ε/W| quoted for the LMG transition
        let c = lmg_map(eps, 0.0, -w).unwrap().config();
        let crit = critical_s0(&c);
        assert!((crit - (eps / (2.0 * w)).abs()).abs() <= 1e-12 * crit.max(1.0));
        assert!((2.0 * crit - (eps / w).abs()).abs() <= 1e-12 * crit.max(1.0));
        // V = −W with W > 0
        let c = lmg_map(eps, -w, w).unwrap().config();
        let crit = critical_s0(&c);
        assert!((crit - (eps / (4.0 * w)).abs()).abs() <= 1e-12 * crit.max(1.0));
    }
}

#[test]
fn lmg_map_rejects_unsupported() {
    assert!(lmg_map(1.0, 0.5, 0.3).is_err());
    assert!(lmg_map(1.0, 0.0, 0.3).is_err()); // ω would be negative
    assert!(lmg_map(1.0, 0.3, -0.3).is_err()); // V = −W with W < 0
    assert!(lmg_map(f64::NAN, 0.0, -1.0).is_err());
}

#[test]
fn classical_dos_matches_closed_form() {
    // Δω = Ω = 0: ε = (3/16) z² with z uniform, so ρ(ε) = 1 / (2 sqrt(a ε)), a = 3/16
    let c = cfg(0.0, 0.0);
    let a = 3.0 / 16.0;
    let bins = EnergyBins::new(0.0, a, 50).unwrap();
    let n_samples = 2_000_000;
    let counts = classical_counts(&c, 1.0, &bins, n_samples, 5, Exec::default()).unwrap();
    assert_eq!(counts.iter().sum::<u64>(), n_samples as u64);
    for (i, &k) in counts.iter().enumerate() {
        let (lo, hi) = (i as f64 * bins.width(), (i + 1) as f64 * bins.width());
        let p = (hi / a).sqrt() - (lo / a).sqrt();
        let mean = p * n_samples as f64;
        let sd = (mean * (1.0 - p)).sqrt();
        assert!((k as f64 - mean).abs() < 5.0 * sd, "bin {i}: {k} vs {mean:.0} ± {sd:.0}");
    }
    let density = density_from_counts(&counts, &bins);
    let integral: f64 = density.iter().sum::<f64>() * bins.width();
    assert!((integral - 1.0).abs() < 1e-12);
}

#[test]
fn classical_dos_integrates_to_one_and_peaks_at_separatrix() {
    let n = 200.0;
    let s0 = n / 2.0;
    let u = 3.0 / 16.0 * n;
    let c = cfg(0.5 * u, 0.0);
    let bins = shared_bins(&c, s0, 200).unwrap();
    let counts = classical_counts(&c, s0, &bins, 1_000_000, 3, Exec::default()).unwrap();
    let d = density_from_counts(&counts, &bins);
    // every sample lands inside the padded range
    assert_eq!(counts.iter().sum::<u64>(), 1_000_000);
    assert!((d.iter().sum::<f64>() * bins.width() - 1.0).abs() < 1e-3);
    let h_sep = stationary_points(&c, s0).unwrap().separatrix_h.unwrap() / (s0 * s0);
    let peak = peak_bin(&d).unwrap();
    assert!(peak.abs_diff(bins.index(h_sep).unwrap()) <= 1);
}

#[test]
fn quantum_histogram_counts_every_level() {
    let n = 40;
    let c = cfg(2.0, 1.0);
    let bins = shared_bins(&c, 20.0, 30).unwrap();
    let e = eigen_spectrum(&build_hamiltonian(n, &c).unwrap()).unwrap();
    let q = quantum_dos(&e, n, &bins).unwrap();
    assert_eq!(q.iter().sum::<u64>(), n as u64 + 1);
    assert!((rescale_energy(400.0, 40) - 1.0).abs() < 1e-15);
    assert!(quantum_dos(&[], n, &bins).is_err());
}

#[test]
fn sweep_peak_travels_bottom_to_top() {
    let n = 200u32;
    let u = 3.0 / 16.0 * n as f64;
    let grid: Vec<f64> = [0.0, 0.25, 0.5, 0.75, 0.95].iter().map(|f| f * u).collect();
    let opts = SpectrumOptions {
        n_bins: 40,
        n_samples: 100_000,
        seed: 1,
    };
    let results = spectrum_sweep(n, &PendulumConfig::new(1.0), &grid, &opts, Exec::default()).unwrap();
    let rel: Vec<f64> = results
        .iter()
        .map(|r| {
            let p = peak_bin(&r.quantum_density()).unwrap();
            let occupied: Vec<usize> = (0..r.bins.n).filter(|&i| r.quantum_dos[i] > 0).collect();
            let (first, last) = (occupied[0], *occupied.last().unwrap());
            (p - first) as f64 / (last - first) as f64
        })
        .collect();
    assert!(rel[0] < 0.1, "{rel:?}");
    assert!(rel[4] > 0.9, "{rel:?}");
    assert!(rel.windows(2).all(|w| w[1] >= w[0]), "{rel:?}");
}

#[test]
fn quantum_dos_converges_to_classical() {
    let dist = |n: u32| {
        let u = 3.0 / 16.0 * n as f64;
        let c = cfg(0.5 * u, 0.0);
        let opts = SpectrumOptions {
            n_bins: 20,
            n_samples: 1_000_000,
            seed: 2,
        };
        let r = spectrum_point(n, &c, &opts, Exec::default()).unwrap();
        r.quantum_density()
            .iter()
            .zip(&r.classical_dos)
            .map(|(q, cl)| (q - cl).abs())
            .sum::<f64>()
            * r.bins.width()
    };
    let (d1, d2, d3) = (dist(50), dist(200), dist(800));
    assert!(d1 > d2 && d2 > d3, "{d1} {d2} {d3}");
}

#[test]
fn sweep_is_reproducible_and_policy_independent() {
    let n = 60u32;
    let grid = [1.0, 3.0, 6.0];
    let opts = SpectrumOptions {
        n_bins: 30,
        n_samples: 200_000,
        seed: 99,
    };
    let a = spectrum_sweep(n, &cfg(0.0, 1.0), &grid, &opts, Exec::Sequential).unwrap();
    let b = spectrum_sweep(n, &cfg(0.0, 1.0), &grid, &opts, Exec::Parallel).unwrap();
    assert_eq!(a, b);
    assert!(spectrum_sweep(n, &cfg(0.0, 1.0), &[], &opts, Exec::Sequential).is_err());
}
