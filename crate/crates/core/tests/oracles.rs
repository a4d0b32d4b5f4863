//! Cross-checks against independent brute-force computations, plus frozen reference values.

use cayley_walk::dense::{DenseState, GeneratingSet};
use cayley_walk::layers;
use cayley_walk::math::{self, WalkSpec};
use cayley_walk::measured;
use cayley_walk::oracle::{self, OracleGraph};
use cayley_walk::spectral::{self, TimeKind, WalkSpectrum};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec(n: usize, s: usize) -> WalkSpec {
    WalkSpec::new(n, s).unwrap()
}

fn weight_s_vectors(n: usize, s: usize) -> Vec<u64> {
    (0..1u64 << n).filter(|v| v.count_ones() as usize == s).collect()
}

#[test]
fn weight_characteristic_by_enumeration() {
    for n in 2..=14 {
        for s in 1..n {
            let gens = weight_s_vectors(n, s);
            let sp = spec(n, s);
            assert_eq!(sp.m(), &BigUint::from(gens.len()));
            for k in 0..=n {
                let v = (1u64 << k) - 1;
                let odd = gens.iter().filter(|&&e| (e & v).count_ones() % 2 == 1).count();
                assert_eq!(math::weight_characteristic(&sp, k), BigUint::from(odd), "n={n} s={s} k={k}");
            }
        }
    }
}

#[test]
fn frozen_small_values() {
    assert_eq!(math::binom(5, 2), BigUint::from(10u32));
    assert_eq!(math::binom(6, 7), BigUint::from(0u32));
    let sp = spec(4, 2);
    let d: Vec<u32> = (0..=4).map(|k| math::weight_characteristic(&sp, k).to_u32().unwrap()).collect();
    assert_eq!(d, [0, 3, 4, 3, 0]);
    assert_eq!(math::kravchuk_via_generating_function(2, 0), [1, 2, 1].map(BigInt::from));
    assert_eq!(math::kravchuk_via_generating_function(2, 2), [1, -2, 1].map(BigInt::from));
    // centre of an even cube: zero for odd s, signed central binomial for even s
    for n in (2..=30).step_by(2) {
        for s in 1..n {
            let phi = math::kravchuk(n, n / 2, s);
            if s % 2 == 1 {
                assert_eq!(phi, BigInt::from(0));
            } else {
                let sign = if (s / 2) % 2 == 0 { 1 } else { -1 };
                assert_eq!(phi, BigInt::from(math::binom((n / 2) as u64, (s / 2) as i64)) * sign);
            }
        }
    }
    for n in 2..=20 {
        for k in 0..=n {
            let e = math::eigenphase(&spec(n, 1), k);
            assert!((e.cos_omega - (1.0 - 2.0 * k as f64 / n as f64)).abs() < 1e-15);
        }
    }
}

/// Walk operator as an explicit matrix on `C^m (x) C^{2^n}`.
fn walk_matrix(g: &GeneratingSet) -> Vec<Vec<f64>> {
    let m = g.m();
    let dim = m << g.n();
    let mut q = vec![vec![0.0; dim]; dim];
    for v in 0..1usize << g.n() {
        for b in 0..m {
            for c in 0..m {
                let coin = 2.0 / m as f64 - if b == c { 1.0 } else { 0.0 };
                // coin maps |c, v> to sum_b G[b][c] |b, v>, then the shift moves it to v xor e_b
                let w = v ^ g.elements()[b] as usize;
                q[w * m + b][v * m + c] += coin;
            }
        }
    }
    q
}

#[test]
fn dense_step_matches_explicit_matrix() {
    for (n, s) in [(3, 1), (4, 2), (5, 2), (5, 3)] {
        let g = GeneratingSet::symmetric(n, s).unwrap();
        let q = walk_matrix(&g);
        let mut st = DenseState::symmetric_start(&g).unwrap();
        let mut v: Vec<Complex64> = st.amplitudes().to_vec();
        for _ in 0..25 {
            st.step();
            v = q.iter().map(|row| row.iter().zip(&v).map(|(a, x)| x * a).sum()).collect();
            for (a, b) in st.amplitudes().iter().zip(&v) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
    // an irregular generating set
    let g = GeneratingSet::new(4, vec![0b0001, 0b0110, 0b1011, 0b1111]).unwrap();
    let q = walk_matrix(&g);
    let mut st = DenseState::symmetric_at(&g, 0b0101).unwrap();
    let mut v: Vec<Complex64> = st.amplitudes().to_vec();
    for _ in 0..25 {
        st.step();
        v = q.iter().map(|row| row.iter().zip(&v).map(|(a, x)| x * a).sum()).collect();
    }
    for (a, b) in st.amplitudes().iter().zip(&v) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn spectral_examples_match_dense() {
    let g = GeneratingSet::symmetric(6, 2).unwrap();
    let mut st = DenseState::symmetric_start(&g).unwrap();
    st.evolve(3);
    assert!((st.origin_overlap().re - spectral::return_amplitude(&spec(6, 2), 3)).abs() < 1e-10);
    st.evolve(1);
    assert!((st.origin_overlap().re - spectral::return_amplitude(&spec(6, 2), 4)).abs() < 1e-10);

    let sp = spec(7, 3);
    let w = WalkSpectrum::new(&sp);
    let g = GeneratingSet::from_spec(&sp).unwrap();
    let mut st = DenseState::symmetric_start(&g).unwrap();
    for t in 0..=60 {
        let p = st.vertex_probability(st.antipode());
        assert!((p - w.hit_amplitude(t).powi(2)).abs() < 1e-9, "t={t}");
        st.step();
    }
}

#[test]
fn hit_prediction_for_eight_two() {
    let sp = spec(8, 2);
    let pred = spectral::predict_time(&sp, TimeKind::HitAtHalfPiM, 0.3).unwrap();
    let g = GeneratingSet::from_spec(&sp).unwrap();
    let mut st = DenseState::symmetric_start(&g).unwrap();
    st.evolve(pred.t as usize);
    let dense = st.vertex_probability(st.antipode());
    assert!((dense - spectral::hit_amplitude(&sp, pred.t).powi(2)).abs() < 1e-10);
}

#[test]
fn quantum_search_is_renamed_dense_walk() {
    for n in 2..=8 {
        for s in (1..=3).filter(|&s| s < n) {
            let sp = spec(n, s);
            let g = GeneratingSet::from_spec(&sp).unwrap();
            let mut o = OracleGraph::new_unchecked_premise(n, s, 7 * n as u64 + s as u64).unwrap();
            let v0 = 0b1011 & ((1u64 << n) - 1);
            let start = o.reveal_name(v0);
            let mut st = DenseState::symmetric_at(&g, v0).unwrap();
            for t in (0..=100).step_by(7) {
                let q = oracle::quantum_search(&mut o, start, t).unwrap();
                let expected_len = if s % 2 == 0 { 1 << (n - 1) } else { 1 << n };
                assert_eq!(q.distribution.len(), expected_len);
                for &(name, p) in &q.distribution {
                    let v = o.reveal_vertex(name).unwrap();
                    assert!((p - st.vertex_probability(v)).abs() < 1e-10, "n={n} s={s} t={t}");
                }
                st.evolve(7);
            }
        }
    }
}

#[test]
fn quantum_hypercube_success_matches_hit_amplitude() {
    let sp = spec(8, 1);
    let pred = spectral::predict_time(&sp, TimeKind::HitAtHalfPiM, 0.3).unwrap();
    let mut o = OracleGraph::new(8, 1, 11).unwrap();
    let start = o.reveal_name(0);
    let q = oracle::quantum_search(&mut o, start, pred.t as usize).unwrap();
    assert!((q.success_probability - spectral::hit_amplitude(&sp, pred.t).powi(2)).abs() < 1e-9);
}

#[test]
fn classical_weights_are_exact() {
    for (n, s) in [(13usize, 2usize), (14, 2), (12, 3), (10, 3), (8, 3)] {
        let mut o = OracleGraph::new_unchecked_premise(n, s, 5).unwrap();
        let v0 = 0b1_0110_1001 & ((1u64 << n) - 1);
        let start = o.reveal_name(v0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = oracle::classical_search(&mut o, start, &mut rng).unwrap();
        for inf in &r.inferences {
            let truth = (o.reveal_vertex(inf.name).unwrap() ^ v0).count_ones() as usize;
            assert_eq!(inf.inferred, truth, "n={n} s={s}");
        }
        for (i, rung) in r.rungs.iter().enumerate() {
            let w = (o.reveal_vertex(*rung).unwrap() ^ v0).count_ones() as usize;
            assert_eq!(w, ((i + 1) * s).min(n));
        }
    }
}

#[test]
fn even_generators_cannot_reach_odd_antipode() {
    // with s even the walk never leaves the even-weight half, so 1^13 is out of reach
    let m = spec(13, 2).m_u64().unwrap();
    assert_eq!(m, 78);
    let mut wins = 0;
    for seed in 0..200 {
        let mut o = OracleGraph::new(13, 2, seed).unwrap();
        let start = o.reveal_name(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = oracle::classical_search(&mut o, start, &mut rng).unwrap();
        assert!(!r.target_reachable);
        assert!(r.queries <= oracle::classical_budget(o.spec()).unwrap());
        wins += r.success as u32;
    }
    assert_eq!(wins, 0);
}

#[test]
fn success_does_not_depend_on_names() {
    for seed in 0..100 {
        let mut o = OracleGraph::new(12, 1, seed).unwrap();
        let start = o.reveal_name(seed % 4096);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = oracle::classical_search(&mut o, start, &mut rng).unwrap();
        assert!(r.success);
        assert_eq!(r.answer, o.reveal_antipode(start));
    }
}

#[test]
fn measurement_after_horizon_is_free_evolution() {
    let sp = spec(7, 3);
    let tr = measured::projective_simulation(&sp, 40, 40).unwrap();
    let alpha = measured::alpha_series(&sp, 40);
    for (a, b) in tr.alpha.iter().zip(&alpha) {
        assert!((a - b).abs() < 1e-10);
    }
    assert_eq!(tr.stop_probability(), 0.0);
    let rep = measured::absorption_bound_check(&sp, 0, 25, 40, 1.0).unwrap();
    assert!(rep.p_t > 0.0);
}

#[test]
fn layer_examples() {
    let sp = spec(6, 3);
    assert_eq!(layers::layer_neighbors(&sp, 5).unwrap(), [2, 4]);
    let sp = spec(8, 2);
    assert_eq!(layers::connection_count(&sp, 2, 2).unwrap(), BigUint::from(12u32));
    let g = GeneratingSet::from_spec(&sp).unwrap();
    let v = 0b11u64;
    let direct = g.elements().iter().filter(|&&e| (v ^ e).count_ones() == 2).count();
    assert_eq!(direct, 12);
}

#[test]
fn classical_example_twelve_three() {
    let mut o = OracleGraph::new_unchecked_premise(12, 3, 99).unwrap();
    let start = o.reveal_name(0);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let r = oracle::classical_search(&mut o, start, &mut rng).unwrap();
    assert!(r.success);
    // 220^2 + 220 for the first shell and its neighbors, 220^2 for each of rungs 2 and 3
    assert_eq!(r.queries, 220 * 220 + 220 + 2 * 220 * 220);
}
