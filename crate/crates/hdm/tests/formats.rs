use hdm::output::{csv_header, read_csv, rows_of, write_csv, write_markdown, write_properties_csv};
use hdm_core::discretisation::Method;
use hdm_core::problems::Problem;
use hdm_core::study::{run_study, ConvergenceReport, StudyConfig};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 5e-6 * b.abs()
}

#[test]
fn empty_report_is_header_only() {
    let report = ConvergenceReport { config: StudyConfig::default(), rows: Vec::new() };
    let text = String::from_utf8(write_csv(&report).unwrap()).unwrap();
    assert_eq!(text, format!("{}\n", csv_header(1).join(",")));
    assert!(read_csv(&text).unwrap().is_empty());
    let vk = ConvergenceReport { config: StudyConfig { problem: Problem::VonKarman, ..StudyConfig::default() }, rows: Vec::new() };
    assert!(String::from_utf8(write_csv(&vk).unwrap()).unwrap().trim_end().ends_with("order_h1_c2"));
}

#[test]
fn two_rows_have_one_order_cell() {
    let report = run_study(&StudyConfig { levels: 2, ..StudyConfig::default() }).unwrap();
    let text = String::from_utf8(write_csv(&report).unwrap()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].ends_with(','));
    assert!(!lines[2].ends_with(','));
    let rows = read_csv(&text).unwrap();
    assert_eq!(rows.iter().filter(|r| r.components[0].order_h1.is_some()).count(), 1);
}

#[test]
fn csv_round_trip() {
    let cfg = StudyConfig { problem: Problem::VonKarman, method: Method::Adini, levels: 3, ..StudyConfig::default() };
    let report = run_study(&cfg).unwrap();
    let parsed = read_csv(&String::from_utf8(write_csv(&report).unwrap()).unwrap()).unwrap();
    let original = rows_of(&report);
    assert_eq!(parsed.len(), original.len());
    for (p, o) in parsed.iter().zip(&original) {
        assert_eq!((p.level, p.n_dofs, p.newton_iters), (o.level, o.n_dofs, o.newton_iters));
        assert!(close(p.h, o.h));
        assert_eq!(p.components.len(), 2);
        for (a, b) in p.components.iter().zip(&o.components) {
            assert!(close(a.err_l2, b.err_l2) && close(a.err_h1, b.err_h1));
            assert!(close(a.err_w14, b.err_w14) && close(a.err_h2, b.err_h2));
            assert_eq!(a.order_h1.is_some(), b.order_h1.is_some());
            if let (Some(x), Some(y)) = (a.order_h1, b.order_h1) {
                assert!(close(x, y));
            }
        }
    }
    let md = write_markdown(&report);
    assert_eq!(md.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| level")).count(), 3);
}

#[test]
fn properties_csv_lists_every_measure() {
    let cfg = StudyConfig { method: Method::Gr, levels: 2, properties: true, ..StudyConfig::default() };
    let report = run_study(&cfg).unwrap();
    let text = String::from_utf8(write_properties_csv(&report).unwrap()).unwrap();
    assert!(text.starts_with("level,h,measure,field,value\n"));
    for m in ["c_d", "s_d", "w_hat_d", "w_tilde_d", "stabilisation_defect"] {
        assert!(text.lines().any(|l| l.split(',').nth(2) == Some(m)), "{m}");
    }
}
