use proptest::prelude::*;
use simvec_core::chart::{gen_corpus, CorpusPlan, MarkGeometry, Mix, ValueMode};
use simvec_core::{canonicalize_doc, validate};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn corpus_items_are_consistent(master in any::<u64>(), i in 0usize..30) {
        let plan = CorpusPlan::new(30, Mix::default(), master).unwrap();
        let item = plan.item(i).unwrap();
        prop_assert_eq!(item.chart.meta.chart_type.family(), plan.family(i));
        let meta = &item.chart.meta;
        let t = &meta.table;
        t.check().unwrap();
        if t.mode == ValueMode::PercentStacked {
            for tm in 0..t.times.len() {
                prop_assert!((t.column_sum(tm) - 100.0).abs() < 1e-9);
            }
        }
        prop_assert!(validate(&item.chart.simvec).is_empty());
        prop_assert_eq!(canonicalize_doc(&item.chart.simvec), item.chart.simvec.clone());
        prop_assert_eq!(meta.bindings.len(), t.categories.len() * t.times.len());
        let y = &meta.y_scale;
        for b in &meta.bindings {
            let exact = (y.extent_of(b.value)).abs();
            prop_assert!((b.pixel_extent as f64 - exact).abs() <= 1.0);
            prop_assert!((y.value_of_extent(y.extent_of(b.value)) - b.value).abs() < 1e-9);
            if let MarkGeometry::Vertex { point } = b.geometry {
                prop_assert!((0..=1000).contains(&point.x));
            }
        }
        // Rebuilding from the seed is deterministic.
        prop_assert_eq!(plan.item(i).unwrap().chart.svg, item.chart.svg);
    }
}

#[test]
fn families_follow_the_mix() {
    let c = gen_corpus(10, Mix { bar: 2.0, line: 1.0, area: 2.0 }, 5).unwrap();
    let fams: Vec<&str> = c.iter().map(|i| i.chart.meta.chart_type.family().name()).collect();
    assert_eq!(fams, ["bar", "bar", "bar", "bar", "line", "line", "area", "area", "area", "area"]);
}
