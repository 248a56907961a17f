use lcmeval_core::deptree::DependencyTree;
use lcmeval_core::modelio::*;
use proptest::prelude::*;

const H2: &str = include_str!("../../../fixtures/corpus/paragraphs/h2.txt");

#[test]
fn rendered_prompts_end_with_the_stimulus() {
    let add = PromptTemplate::default_for(Task::Add).render("Han sover.").unwrap();
    assert!(add.ends_with("Here is the sentence: \"Han sover.\""));
    let lix = PromptTemplate::default_for(Task::Lix).render(H2.trim_end()).unwrap();
    assert!(lix.contains(H2.trim_end()));
    assert!(lix.contains("LIX="));
    assert!(matches!(PromptTemplate::default_for(Task::Add).render(""), Err(TemplateError::EmptyStimulus)));
    let twice = format!("{PLACEHOLDER} och {PLACEHOLDER}");
    assert!(matches!(PromptTemplate::new(Task::Add, twice), Err(TemplateError::Placeholder(2))));
}

#[test]
fn realistic_reply() {
    let raw = "Sure! Here is the parse:\n\n```\n1, Han, 2, 1\n2, köper, 0, 0\n3, en, 4, 1\n4, bok, 2, 3\n5, ., 2, 3\n```\n\nThe average dependency distance is (1+0+1+2+3)/5 = 1,4.";
    let p = parse_dependency_response(raw, Some(5)).unwrap();
    assert_eq!(p.tree.forms(), ["Han", "köper", "en", "bok", "."]);
    assert_eq!(p.reported_add, Some(1.4));
    assert_eq!(
        p.parse_warnings,
        [ParseWarning { line: 7, defect: RowDefect::DistanceMismatch { index: 4, stated: 3, computed: 2 } }]
    );
}

#[test]
fn out_of_range_head_is_kept() {
    let raw = "1, a, 2, 1\n2, b, 0, 0\n3, c, 9, 6\n";
    let p = parse_dependency_response(raw, None).unwrap();
    assert_eq!(p.tree.len(), 3);
    assert!(!p.tree.violations().is_empty());
    assert_eq!(p.reported_add, None);
}

#[test]
fn refusal_has_no_rows() {
    assert_eq!(parse_dependency_response("I cannot parse this sentence.", None), Err(NoRowsFound));
}

#[test]
fn lix_extraction() {
    let r = parse_lix_response("…therefore LIX=42.5");
    assert_eq!((r.reported_lix, r.extraction_method), (Some(42.5), ExtractionMethod::Marker));
    let r = parse_lix_response("Steg 1 ger 12. LIX = 38");
    assert_eq!((r.reported_lix, r.extraction_method), (Some(38.0), ExtractionMethod::Marker));
    let r = parse_lix_response("The readability score is 47.");
    assert_eq!((r.reported_lix, r.extraction_method), (Some(47.0), ExtractionMethod::FallbackLastNumber));
    let r = parse_lix_response("LIX=40,5");
    assert_eq!(r.reported_lix, Some(40.5));
    let r = parse_lix_response("no idea");
    assert_eq!((r.reported_lix, r.extraction_method), (None, ExtractionMethod::None));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn never_panics(raw in "(\\PC|\n){0,300}") {
        let _ = parse_dependency_response(&raw, Some(5));
        let _ = parse_lix_response(&raw);
    }

    #[test]
    fn mismatch_warnings_match_recomputation(
        rows in prop::collection::vec(("[a-zåäö]{1,8}", 0usize..12, 0usize..12), 1..20),
        avg in prop::option::of(0.0f64..10.0),
    ) {
        let mut raw = String::from("Parse:\n");
        for (i, (w, h, d)) in rows.iter().enumerate() {
            raw.push_str(&format!("{}, {}, {}, {}\n", i + 1, w, h, d));
        }
        if let Some(a) = avg {
            raw.push_str(&format!("Average: {a:.2}\n"));
        }
        let p = parse_dependency_response(&raw, None).unwrap();
        prop_assert_eq!(p.tree.len(), rows.len());
        let expected = p
            .tree
            .nodes()
            .iter()
            .zip(&p.stated_distances)
            .filter(|(n, &d)| d != if n.head == 0 { 0 } else { n.index.abs_diff(n.head) })
            .count();
        let found = p.parse_warnings.iter().filter(|w| matches!(w.defect, RowDefect::DistanceMismatch { .. })).count();
        prop_assert_eq!(found, expected);
        prop_assert_eq!(p.reported_add.is_some(), avg.is_some());
    }
}
