use mls_core::census::{enumerate_conjugacy, growth_rate, necklaces};
use mls_core::metrics::{GeneratingSet, MetricHandle};
use mls_core::spectral::{jsr_estimate, operator_norm, spectral_radius, Matrix, MatrixSet};
use mls_core::{abelianize, canonical, cyclic_reduce, membership, stallings_build, Automorphism, Letter, Word};
use proptest::prelude::*;

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..4, 0..=max).prop_map(|v| Word::from_letters(v.into_iter().map(|l| l as Letter)))
}

fn nonempty(max: usize) -> impl Strategy<Value = Word> {
    word(max).prop_filter("nontrivial", |w| !w.is_empty())
}

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

/// Products of elements of `gens` and their inverses, up to `k` factors.
fn products(gens: &[Word], k: usize) -> Vec<Word> {
    let mut sym: Vec<Word> = gens.to_vec();
    sym.extend(gens.iter().map(Word::inverse));
    let mut all = vec![Word::identity()];
    let mut level = vec![Word::identity()];
    for _ in 0..k {
        level = level.iter().flat_map(|x| sym.iter().map(move |g| x.multiply(g))).collect();
        all.extend(level.iter().cloned());
    }
    all
}

fn s_prime() -> MetricHandle<f64> {
    MetricHandle::word(GeneratingSet::new(2, &[w("a"), w("b"), w("ab")]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_axioms(x in word(10), y in word(10), z in word(10)) {
        prop_assert_eq!(x.multiply(&y).multiply(&z), x.multiply(&y.multiply(&z)));
        prop_assert!(x.multiply(&x.inverse()).is_empty());
        prop_assert_eq!(x.inverse().inverse(), x.clone());
        prop_assert!(x.letters().windows(2).all(|p| p[0] != p[1] ^ 1));
    }

    #[test]
    fn abelianization_is_a_homomorphism(x in word(12), y in word(12)) {
        let (ax, ay) = (abelianize(&x, 2), abelianize(&y, 2));
        let sum: Vec<i64> = ax.iter().zip(&ay).map(|(a, b)| a + b).collect();
        prop_assert_eq!(abelianize(&x.multiply(&y), 2), sum);
    }

    #[test]
    fn cyclic_reduction_is_a_conjugacy_normal_form(x in word(12), g in word(6)) {
        let (c, h) = cyclic_reduce(&x);
        prop_assert_eq!(h.multiply(c.word()).multiply(&h.inverse()), x.clone());
        prop_assert_eq!(c.word().conjugate_by(&h.inverse()), x.clone());
        prop_assert!(c.word().is_cyclically_reduced());
        let conj = g.multiply(&x).multiply(&g.inverse());
        prop_assert_eq!(canonical(&conj), canonical(&x));
        // least among all rotations
        let l = c.word().letters();
        for r in 0..l.len() {
            let rot: Vec<Letter> = [&l[r..], &l[..r]].concat();
            prop_assert!(l <= &rot[..]);
        }
    }

    #[test]
    fn automorphism_round_trip(x in word(12)) {
        let phi = Automorphism::new(vec![w("a"), w("ba")], vec![w("a"), w("bA")]).unwrap();
        prop_assert_eq!(phi.apply_inverse(&phi.apply(&x)), x.clone());
        prop_assert_eq!(phi.apply(&phi.apply_inverse(&x)), x);
    }

    #[test]
    fn stallings_accepts_products(i in 0usize..3) {
        let gens = [vec![w("a")], vec![w("a"), w("baB")], vec![w("ab"), w("bba")]][i].clone();
        let h = stallings_build(2, &gens).unwrap();
        for p in products(&gens, 3) {
            prop_assert!(membership(&h, &p), "{p} should lie in the subgroup");
        }
    }

    #[test]
    fn cyclic_subgroup_membership_matches_brute_force(x in word(8)) {
        let h = stallings_build(2, &[w("aa")]).unwrap();
        let is_power = x.letters().iter().all(|&l| l == x.letters()[0]) && x.len() % 2 == 0
            && x.letters().first().is_none_or(|&l| l < 2);
        prop_assert_eq!(membership(&h, &x), is_power);
    }

    #[test]
    fn word_metric_axioms(x in word(7), y in word(7)) {
        let m = s_prime();
        let dx = m.distance(&x).unwrap();
        let dxy = m.distance_between(&x, &y).unwrap();
        prop_assert_eq!(m.distance(&x.inverse()).unwrap(), dx);
        prop_assert_eq!(dxy, m.distance_between(&y, &x).unwrap());
        prop_assert!(dxy <= m.distance_between(&x, &Word::identity()).unwrap() + m.distance(&y).unwrap());
        prop_assert!(dx <= x.len() as f64 && 2.0 * dx >= x.len() as f64);
        prop_assert_eq!(dx == 0.0, x.is_empty());
    }

    #[test]
    fn translation_length_is_a_conjugacy_invariant(x in nonempty(8), g in word(4), n in 1i64..4) {
        let m = s_prime();
        let l = m.translation_length(&x).unwrap().unwrap();
        let conj = g.multiply(&x).multiply(&g.inverse());
        prop_assert!((m.translation_length(&conj).unwrap().unwrap() - l).abs() < 1e-12);
        prop_assert!((m.translation_length(&x.pow(n)).unwrap().unwrap() - n as f64 * l).abs() < 1e-9);
        prop_assert!(l <= m.distance(&x).unwrap() + 1e-12);
    }

    #[test]
    fn spectral_radius_below_norm(v in prop::collection::vec(-3.0f64..3.0, 4), k in 1i32..8) {
        let a = Matrix::from_row_major(2, v).unwrap();
        let r = spectral_radius(&a).unwrap();
        prop_assert!(r <= operator_norm(&a) + 1e-8);
        let mut p = a.clone();
        for _ in 1..k {
            p = p.mul(&a);
        }
        let rk = spectral_radius(&p).unwrap();
        prop_assert!((rk - r.powi(k)).abs() <= 1e-8 * rk.max(1.0));
    }

    #[test]
    fn jsr_sandwich_brackets_generators(v in prop::collection::vec(-1.0f64..1.0, 8)) {
        let mats = vec![Matrix::from_row_major(2, v[..4].to_vec()).unwrap(), Matrix::from_row_major(2, v[4..].to_vec()).unwrap()];
        prop_assume!(mats.iter().all(|m| !m.is_zero()));
        let set = MatrixSet::new(mats.clone()).unwrap();
        let e = jsr_estimate(&set, 6, 1_000_000).unwrap();
        let max_rho = mats.iter().map(|m| spectral_radius(m).unwrap()).fold(0.0, f64::max);
        let max_norm = mats.iter().map(operator_norm).fold(0.0, f64::max);
        prop_assert!(e.lower >= max_rho - 1e-12);
        prop_assert!(e.lower <= e.upper);
        prop_assert!(e.upper <= max_norm + 1e-12);
    }

    #[test]
    fn growth_of_geometric_counts(base in 1.5f64..5.0, c in 0.5f64..20.0) {
        let counts: Vec<(f64, f64)> = (0..14).map(|t| (t as f64, (c * base.powi(t)).round().max(1.0))).collect();
        let mono = counts.windows(2).all(|p| p[0].1 <= p[1].1);
        prop_assume!(mono);
        let g = growth_rate(&counts).unwrap();
        prop_assert!((g.rate - base.ln()).abs() < 0.05, "{} vs {}", g.rate, base.ln());
    }
}

#[test]
fn class_census_agrees_with_necklaces() {
    let s = MetricHandle::<f64>::standard(2);
    let c = enumerate_conjugacy(&s, 7.0).unwrap();
    let n = necklaces(2, 7);
    assert_eq!(c.len(), n.len());
    for (row, neck) in c.rows.iter().zip(&n) {
        assert_eq!(&row.class, neck);
        assert!(row.ell.is_exact());
        assert_eq!(row.ell.lower, neck.len() as f64);
    }
}
