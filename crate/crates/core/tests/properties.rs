use std::sync::OnceLock;

use holocode::builder::{build_code, default_seed, HolographicCode};
use holocode::decoder::{Decoder, DecoderOptions};
use holocode::gf2::LinearSolver;
use holocode::sim::{binomial_mix, sample_fixed_weight_error, trial_rng};
use holocode::tiling::{Family, RateVariant};
use holocode::{BitVec, Gf2Matrix, Pauli, PauliVector};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Gf2Matrix> {
    (1usize..14, 1usize..90).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), c), r).prop_map(move |rows| {
            Gf2Matrix::from_rows(rows.into_iter().map(BitVec::from_bools).collect(), c).unwrap()
        })
    })
}

fn bits(len: usize) -> impl Strategy<Value = BitVec> {
    prop::collection::vec(any::<bool>(), len).prop_map(BitVec::from_bools)
}

fn pauli_vector(n: usize) -> impl Strategy<Value = PauliVector> {
    prop::collection::vec(0usize..4, n).prop_map(move |ps| {
        let mut v = PauliVector::identity(n);
        for (q, p) in ps.into_iter().enumerate() {
            v.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][p]);
        }
        v
    })
}

fn heptagon_r2() -> &'static (HolographicCode, Decoder) {
    static CODE: OnceLock<(HolographicCode, Decoder)> = OnceLock::new();
    CODE.get_or_init(|| {
        let seed = default_seed(Family::Heptagon, RateVariant::Max);
        let code = build_code(Family::Heptagon, 2, RateVariant::Max, &seed).unwrap();
        let decoder = Decoder::new(&code, DecoderOptions::default()).unwrap();
        (code, decoder)
    })
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_column_count(m in matrix()) {
        let kernel = m.kernel();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().is_zero());
        }
        let span = Gf2Matrix::from_rows(kernel.clone(), m.cols()).unwrap();
        prop_assert_eq!(span.rank(), kernel.len());
    }

    #[test]
    fn solve_recovers_a_preimage(m in matrix(), seed in any::<u64>()) {
        let x = BitVec::from_bools((0..m.cols()).map(|i| (seed.rotate_left(i as u32) ^ (i as u64 * 0x9e37)) & 1 == 1));
        let y = m.mul_vec(&x).unwrap();
        let found = m.solve(&y).unwrap();
        prop_assert_eq!(m.mul_vec(&found).unwrap(), y.clone());
        let solver = LinearSolver::new(&m);
        prop_assert_eq!(solver.rank(), m.rank());
        prop_assert_eq!(m.mul_vec(&solver.solve(&y).unwrap()).unwrap(), y);
    }

    #[test]
    fn right_inverse_of_full_row_rank(m in matrix()) {
        let reduced = m.rref();
        let rows: Vec<BitVec> = reduced.matrix.row_vecs()[..reduced.rank].to_vec();
        prop_assume!(!rows.is_empty());
        let s = Gf2Matrix::from_rows(rows, m.cols()).unwrap();
        let f = s.right_inverse().unwrap();
        prop_assert_eq!(s.mul(&f).unwrap(), Gf2Matrix::identity(s.rows()));
    }

    #[test]
    fn rref_is_idempotent(m in matrix()) {
        let once = m.rref();
        let twice = once.matrix.rref();
        prop_assert_eq!(&once.matrix, &twice.matrix);
        prop_assert_eq!(once.pivots, twice.pivots);
    }

    #[test]
    fn inconsistent_systems_are_rejected(m in matrix(), y in bits(14)) {
        let y = y.slice(0, m.rows());
        let consistent = m.transpose().vstack(&Gf2Matrix::from_rows(vec![y.clone()], m.rows()).unwrap()).unwrap().rank()
            == m.rank();
        prop_assert_eq!(m.solve(&y).is_ok(), consistent);
    }

    #[test]
    fn symplectic_product_counts_anticommuting_sites(a in pauli_vector(20), b in pauli_vector(20)) {
        let sites = (0..20)
            .filter(|&q| {
                let (p, r) = (a.get(q), b.get(q));
                p != Pauli::I && r != Pauli::I && p != r
            })
            .count();
        prop_assert_eq!(a.anticommutes(&b), sites % 2 == 1);
    }

    #[test]
    fn fixed_weight_errors_have_that_weight(a in 0usize..=42, trial in any::<u64>(), seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 7, a, trial);
        let e = sample_fixed_weight_error(42, a, &mut rng).unwrap();
        prop_assert_eq!(e.weight(), a);
        let mut again = trial_rng(seed, 7, a, trial);
        prop_assert_eq!(sample_fixed_weight_error(42, a, &mut again).unwrap(), e);
    }

    #[test]
    fn mixing_is_monotone_in_the_table(
        base in prop::collection::vec(0.0f64..1.0, 2..60),
        bump in prop::collection::vec(0.0f64..0.2, 60),
        p in 0.0f64..1.0,
    ) {
        let low: Vec<(f64, f64)> = base.iter().map(|&x| (x, 0.0)).collect();
        let high: Vec<(f64, f64)> = base.iter().zip(&bump).map(|(&x, &d)| ((x + d).min(1.0), 0.0)).collect();
        let (a, _) = binomial_mix(&low, p).unwrap();
        let (b, _) = binomial_mix(&high, p).unwrap();
        prop_assert!(b >= a - 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn mixing_a_nondecreasing_table_is_nondecreasing_in_p(
        steps in prop::collection::vec(0.0f64..1.0, 2..60),
        p in 0.0f64..0.99,
        dp in 0.0f64..0.01,
    ) {
        let total: f64 = steps.iter().sum();
        let mut acc = 0.0;
        let table: Vec<(f64, f64)> = steps.iter().map(|s| { acc += s / total; (acc.min(1.0), 0.0) }).collect();
        let (a, _) = binomial_mix(&table, p).unwrap();
        let (b, _) = binomial_mix(&table, p + dp).unwrap();
        prop_assert!(b >= a - 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn syndromes_are_linear(a in pauli_vector(42), b in pauli_vector(42)) {
        let (_, decoder) = heptagon_r2();
        let sa = decoder.syndrome(&a).unwrap().bits();
        let sb = decoder.syndrome(&b).unwrap().bits();
        prop_assert_eq!(decoder.syndrome(&a.mul(&b)).unwrap().bits(), sa.xor(&sb));
    }

    #[test]
    fn corrections_match_the_syndrome_and_never_outweigh_the_error(e in pauli_vector(42)) {
        let (_, decoder) = heptagon_r2();
        let syndrome = decoder.syndrome(&e).unwrap();
        let decoded = decoder.decode(&syndrome).unwrap();
        prop_assert!(decoded.certified);
        prop_assert_eq!(decoder.syndrome(&decoded.correction).unwrap(), syndrome.clone());
        prop_assert!(decoded.correction.x().count_ones() <= e.x().count_ones());
        prop_assert!(decoded.correction.z().count_ones() <= e.z().count_ones());
        let pure = decoder.pure_error(&syndrome).unwrap();
        prop_assert_eq!(decoder.syndrome(&pure).unwrap(), syndrome);
    }

    #[test]
    fn stabilizers_leave_the_syndrome_and_logical_action_unchanged(e in pauli_vector(42), pick in any::<u64>()) {
        let (code, decoder) = heptagon_r2();
        let mut shifted = e.clone();
        for (i, s) in code.stabilizers.iter().enumerate() {
            if (pick >> (i % 64)) & 1 == 1 {
                shifted.mul_assign(s);
            }
        }
        prop_assert_eq!(decoder.syndrome(&shifted).unwrap(), decoder.syndrome(&e).unwrap());
        prop_assert_eq!(decoder.net_logical_effect(&shifted).unwrap(), decoder.net_logical_effect(&e).unwrap());
    }
}
