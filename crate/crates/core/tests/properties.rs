use proptest::prelude::*;
use sixsieve::lambda::{lambda_range, Variant};
use sixsieve::parallel::{partition, run_parallel, RunOptions};
use sixsieve::residue::{matrix_element, product_class, ClassTag, GeneratorIndex, MatrixIndex};

fn idx(v: i64) -> GeneratorIndex {
    GeneratorIndex::new(v).unwrap()
}

fn class_of_factor(v: i64) -> ClassTag {
    ClassTag::of(v).expect("6k+1 factor is coprime to 6")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn matrix_is_symmetric(i in -1000i64..=1000, j in -1000i64..=1000) {
        let m = MatrixIndex::new(i, j);
        prop_assert_eq!(matrix_element(m).unwrap(), matrix_element(m.transposed()).unwrap());
    }

    #[test]
    fn matrix_factorization_identity(i in -1000i64..=1000, j in -1000i64..=1000) {
        let a = matrix_element(MatrixIndex::new(i, j)).unwrap();
        prop_assert_eq!(6 * a + 1, (6 * i + 1) * (6 * j + 1));
    }

    #[test]
    fn quadrant_signs(i in 1i64..=1000, j in 1i64..=1000) {
        prop_assert!(matrix_element(MatrixIndex::new(i, j)).unwrap() > 0);
        prop_assert!(matrix_element(MatrixIndex::new(-i, j)).unwrap() <= 0);
        prop_assert!(matrix_element(MatrixIndex::new(i, -j)).unwrap() <= 0);
        prop_assert!(matrix_element(MatrixIndex::new(-i, -j)).unwrap() > 0);
    }

    #[test]
    fn product_classes_close(i in 1i64..=1000, j in 1i64..=1000, si: bool, sj: bool) {
        let (i, j) = (if si { i } else { -i }, if sj { j } else { -j });
        let (f1, f2) = (6 * i + 1, 6 * j + 1);
        // Factor classes as seen from their absolute values.
        let t1 = class_of_factor(f1.abs());
        let t2 = class_of_factor(f2.abs());
        prop_assert_eq!(product_class(t1, t2), class_of_factor((f1 * f2).abs()));
        if i > 0 && j > 0 {
            prop_assert_eq!(product_class(t1, t2), ClassTag::Alpha);
        }
    }

    #[test]
    fn lambda_is_additive(a in 1i64..=10_000, b in 1i64..=10_000, c in 1i64..=10_000) {
        let mut v = [a, b, c];
        v.sort_unstable();
        let [a, b, c] = v;
        prop_assume!(b < c);
        let whole = lambda_range(idx(a), idx(c), false, Variant::Fast).unwrap().l;
        let left = lambda_range(idx(a), idx(b), false, Variant::Fast).unwrap().l;
        let right = lambda_range(idx(b + 1), idx(c), false, Variant::Fast).unwrap().l;
        prop_assert_eq!(whole, left + right);
    }

    #[test]
    fn lambda_conserves_candidates(c1 in 1i64..=5000, len in 0i64..500) {
        let r = lambda_range(idx(c1), idx(c1 + len), true, Variant::Faithful).unwrap();
        prop_assert_eq!(r.l + r.primes.len() as u64, 2 * (len as u64 + 1));
        prop_assert!(r.primes.windows(2).all(|w| w[0].value < w[1].value));
        prop_assert!(r.primes.iter().all(|p| p.value > 3));
    }

    #[test]
    fn partition_covers_exactly(c1 in 1i64..=1000, len in 0i64..300, parts in 1u64..=40) {
        let n = len as u64 + 1;
        prop_assume!(parts <= n);
        let plan = partition(idx(c1), idx(c1 + len), parts).unwrap();
        prop_assert_eq!(plan.len() as u64, parts);
        prop_assert_eq!(plan[0].start.get(), c1);
        prop_assert_eq!(plan.last().unwrap().end.get(), c1 + len);
        for w in plan.windows(2) {
            prop_assert_eq!(w[0].end.get() + 1, w[1].start.get());
            prop_assert!(w[0].count() >= w[1].count());
            prop_assert!(w[0].count() - w[1].count() <= 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn plan_sum_equals_whole(c1 in 1i64..=5000, len in 0i64..3000, parts in 1u64..=8, chunk in 1u64..500) {
        prop_assume!(parts <= len as u64 + 1);
        let (a, b) = (idx(c1), idx(c1 + len));
        let seq = lambda_range(a, b, true, Variant::Fast).unwrap();
        let per_plan: u64 = partition(a, b, parts)
            .unwrap()
            .iter()
            .map(|r| lambda_range(r.start, r.end, false, Variant::Fast).unwrap().l)
            .sum();
        prop_assert_eq!(per_plan, seq.l);
        let par = run_parallel(a, b, parts, true, Variant::Fast, RunOptions::default().with_chunk(chunk)).unwrap();
        prop_assert_eq!(par, seq);
    }
}
