use std::sync::OnceLock;

use braidhash::compiler::{Compiler, HashParams, Stage};
use braidhash::icosa::IcosaGroup;
use braidhash::pseudo::{table_file_name, PseudoGroupTable};
use braidhash::search::{build_table, TableMethod, WordFamily};
use braidhash::stats::{deviation_analysis, fit_wd, SampleSet};
use braidhash::su2::{distance, haar_random, quaternion_to_su2, Quaternion, Unitary2};
use braidhash::Error;
use num_complex::Complex64;
use proptest::prelude::*;

struct Fixture {
    group: IcosaGroup,
    coarse: PseudoGroupTable,
    fine: PseudoGroupTable,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let group = IcosaGroup::build();
        let coarse = build_table(&group, 6, TableMethod::Exhaustive, WordFamily::All).unwrap();
        let fine = build_table(&group, 12, TableMethod::Mitm, WordFamily::Weave).unwrap();
        Fixture {
            group,
            coarse,
            fine,
        }
    })
}

fn params() -> HashParams {
    HashParams {
        coarse_length: 6,
        coarse_factors: 2,
        fine_length: 12,
        fine_factors: 2,
        iterations: 1,
    }
}

fn arb_gate() -> impl Strategy<Value = Unitary2> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, 0.0..std::f64::consts::TAU)
        .prop_filter("nonzero", |(w, x, y, z, _)| w * w + x * x + y * y + z * z > 1e-3)
        .prop_map(|(w, x, y, z, phase)| {
            let q = Quaternion::normalized(w, x, y, z);
            quaternion_to_su2(&q)
                .unwrap()
                .into_unitary()
                .scale(Complex64::from_polar(1.0, phase))
        })
}

#[test]
fn tables_survive_disk() {
    let f = fixture();
    let dir = tempfile::tempdir().unwrap();
    for t in [&f.coarse, &f.fine] {
        let path = dir.path().join(table_file_name(t.nominal_length()));
        t.save(&path).unwrap();
        let back = PseudoGroupTable::load(&path, &f.group).unwrap();
        assert_eq!(&back, t);
    }
    let missing = PseudoGroupTable::load(&dir.path().join("nope.tbl"), &f.group);
    assert!(matches!(missing, Err(Error::Io(_))));
}

#[test]
fn identity_tuple_has_no_deviation() {
    let f = fixture();
    let a = deviation_analysis(&f.fine, &f.group, &[0, 0, 0, 0]).unwrap();
    assert_eq!(a.h_first.norm(), 0.0);
    assert!(a.residual < 1e-15);
    assert_eq!(a.max_delta, 0.0);
}

#[test]
fn mismatched_pipeline_is_rejected() {
    let f = fixture();
    let mut p = params();
    p.fine_length = 24;
    assert!(matches!(
        Compiler::new(&f.group, p, &f.coarse, &[&f.fine]),
        Err(Error::Config(_))
    ));
    let mut p = params();
    p.iterations = 2;
    assert!(matches!(
        Compiler::new(&f.group, p, &f.coarse, &[&f.fine]),
        Err(Error::Config(_))
    ));
}

#[test]
fn haar_targets_improve_on_average() {
    let f = fixture();
    let c = Compiler::new(&f.group, params(), &f.coarse, &[&f.fine]).unwrap();
    let mut rng = braidhash::su2::seeded_rng(41);
    let (mut pre, mut fin) = (0.0, 0.0);
    for _ in 0..40 {
        let t = *haar_random(&mut rng).as_unitary();
        let r = c.compile(&t);
        pre += r.history[0].dist;
        fin += r.approximation.dist;
    }
    assert!(fin * 3.0 < pre, "{pre} vs {fin}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_axioms(a in arb_gate(), b in arb_gate(), c in arb_gate(), u in arb_gate()) {
        let dab = distance(&a, &b).unwrap();
        prop_assert!((dab - distance(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!(distance(&a, &a).unwrap() < 1e-7);
        prop_assert!(dab <= std::f64::consts::SQRT_2 + 1e-12);
        prop_assert!(dab <= distance(&a, &c).unwrap() + distance(&c, &b).unwrap() + 1e-12);
        // left and right invariance
        prop_assert!((distance(&(u * a), &(u * b)).unwrap() - dab).abs() < 1e-9);
        prop_assert!((distance(&(a * u), &(b * u)).unwrap() - dab).abs() < 1e-9);
    }

    #[test]
    fn compiled_word_replays(t in arb_gate()) {
        let f = fixture();
        let c = Compiler::new(&f.group, params(), &f.coarse, &[&f.fine]).unwrap();
        let r = c.compile(&t);
        let replay = distance(&r.approximation.word.evaluate(), &t).unwrap();
        prop_assert!((replay - r.approximation.dist).abs() < 1e-9);
        prop_assert!(r.approximation.dist <= r.history[0].dist);
        prop_assert_eq!(r.history.len(), 2);
        prop_assert_eq!(r.approximation.stage, Stage::Refined(1));
        prop_assert!(r.reduced_length() <= r.raw_length());
        prop_assert!(r.raw_length() <= r.nominal_length);
        let text = r.approximation.word.to_string();
        let back: braidhash::braid::BraidWord = text.parse().unwrap();
        prop_assert_eq!(back, r.approximation.word);
    }

    #[test]
    fn wd_fit_is_scale_equivariant(
        v in prop::collection::vec(1e-4f64..0.5, 100..300),
        scale in 0.1f64..3.0,
    ) {
        let a = fit_wd(&SampleSet::new(v.clone())).unwrap();
        let b = fit_wd(&SampleSet::new(v.iter().map(|x| x * scale).collect())).unwrap();
        prop_assert!((b.d_l - scale * a.d_l).abs() < 1e-12 * (1.0 + b.d_l));
        prop_assert!((b.ks_stat - a.ks_stat).abs() < 1e-9);
    }
}
