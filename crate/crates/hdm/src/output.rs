//! Report files: the convergence CSV, its markdown mirror and the
//! property CSV. Floats carry six significant digits.

use hdm_core::analysis::PropertyMeasures;
use hdm_core::study::ConvergenceReport;

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("malformed header: {0}")]
    Header(String),
    #[error("row {row}: bad value `{value}` in column `{column}`")]
    Value { row: usize, column: String, value: String },
}

pub fn sig6(x: f64) -> String {
    format!("{x:.5e}")
}

const FIXED: [&str; 4] = ["level", "h", "ndofs", "newton_iters"];
const PER_COMPONENT: [&str; 5] = ["err_l2", "err_h1", "err_w14", "err_h2", "order_h1"];

pub fn csv_header(n_components: usize) -> Vec<String> {
    let mut h: Vec<String> = FIXED.iter().map(|s| s.to_string()).collect();
    for c in 1..=n_components {
        h.extend(PER_COMPONENT.iter().map(|s| format!("{s}_c{c}")));
    }
    h
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentRow {
    pub err_l2: f64,
    pub err_h1: f64,
    pub err_w14: f64,
    pub err_h2: f64,
    pub order_h1: Option<f64>,
}

/// One line of the convergence CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub level: usize,
    pub h: f64,
    pub n_dofs: usize,
    pub newton_iters: usize,
    pub components: Vec<ComponentRow>,
}

pub fn rows_of(report: &ConvergenceReport) -> Vec<CsvRow> {
    report
        .rows
        .iter()
        .map(|r| CsvRow {
            level: r.level,
            h: r.h,
            n_dofs: r.n_dofs,
            newton_iters: r.newton.iterations,
            components: r
                .errors
                .components
                .iter()
                .zip(&r.orders)
                .map(|(e, &o)| ComponentRow { err_l2: e.rel_l2, err_h1: e.rel_h1, err_w14: e.rel_w14, err_h2: e.rel_h2, order_h1: o })
                .collect(),
        })
        .collect()
}

pub fn write_csv(report: &ConvergenceReport) -> Result<Vec<u8>, OutputError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(csv_header(report.n_components()))?;
    for row in rows_of(report) {
        let mut rec = vec![row.level.to_string(), sig6(row.h), row.n_dofs.to_string(), row.newton_iters.to_string()];
        for c in &row.components {
            rec.extend([sig6(c.err_l2), sig6(c.err_h1), sig6(c.err_w14), sig6(c.err_h2)]);
            rec.push(c.order_h1.map(sig6).unwrap_or_default());
        }
        w.write_record(&rec)?;
    }
    w.into_inner().map_err(|e| OutputError::Csv(e.into_error().into()))
}

pub fn read_csv(text: &str) -> Result<Vec<CsvRow>, OutputError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.len() < FIXED.len() || !(header.len() - FIXED.len()).is_multiple_of(PER_COMPONENT.len()) {
        return Err(OutputError::Header(header.join(",")));
    }
    let k = (header.len() - FIXED.len()) / PER_COMPONENT.len();
    if header != csv_header(k) {
        return Err(OutputError::Header(header.join(",")));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = |j: usize| OutputError::Value { row: i + 1, column: header[j].clone(), value: rec[j].to_string() };
        let int = |j: usize| rec[j].parse::<usize>().map_err(|_| bad(j));
        let float = |j: usize| rec[j].parse::<f64>().map_err(|_| bad(j));
        let components = (0..k)
            .map(|c| {
                let b = FIXED.len() + c * PER_COMPONENT.len();
                Ok(ComponentRow {
                    err_l2: float(b)?,
                    err_h1: float(b + 1)?,
                    err_w14: float(b + 2)?,
                    err_h2: float(b + 3)?,
                    order_h1: if rec[b + 4].is_empty() { None } else { Some(float(b + 4)?) },
                })
            })
            .collect::<Result<Vec<_>, OutputError>>()?;
        rows.push(CsvRow { level: int(0)?, h: float(1)?, n_dofs: int(2)?, newton_iters: int(3)?, components });
    }
    Ok(rows)
}

/// Per component, `h | broken H¹ error | order` columns after the level.
pub fn write_markdown(report: &ConvergenceReport) -> String {
    let c = &report.config;
    let k = report.n_components();
    let mut s = format!("### {} / {} / {}\n\n| level | ndofs | newton |", c.problem, c.method, c.domain);
    for i in 1..=k {
        s.push_str(&format!(" h | err_h1_c{i} | order_c{i} |"));
    }
    s.push_str("\n|---:|---:|---:|");
    s.push_str(&"---:|---:|---:|".repeat(k));
    s.push('\n');
    for row in rows_of(report) {
        s.push_str(&format!("| {} | {} | {} |", row.level, row.n_dofs, row.newton_iters));
        for comp in &row.components {
            let order = comp.order_h1.map(|o| format!("{o:.4}")).unwrap_or_else(|| "-".into());
            s.push_str(&format!(" {:.5} | {:.6} | {order} |", row.h, comp.err_h1));
        }
        s.push('\n');
    }
    s
}

fn property_records(p: &PropertyMeasures) -> Vec<(&'static str, String, f64)> {
    let mut v = vec![
        ("c_d", String::new(), p.c_d),
        ("c_d_l2", String::new(), p.c_d_l2),
        ("c_d_l4", String::new(), p.c_d_l4),
        ("alpha_d", String::new(), p.alpha_d),
        ("gamma_d", String::new(), p.gamma_d),
    ];
    if let Some(d) = p.stabilisation_defect {
        v.push(("stabilisation_defect", String::new(), d));
    }
    for (name, list) in [
        ("s_d", &p.s_d),
        ("w_d", &p.w_d),
        ("w_hat_d", &p.w_hat_d),
        ("w_hat_div_d", &p.w_hat_div_d),
        ("w_tilde_d", &p.w_tilde_d),
    ] {
        v.extend(list.iter().map(|n| (name, n.id.to_string(), n.value)));
    }
    v
}

/// Long format: `level,h,measure,field,value`; `field` names the test
/// function or field and is empty for the scalar measures.
pub fn write_properties_csv(report: &ConvergenceReport) -> Result<Vec<u8>, OutputError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["level", "h", "measure", "field", "value"])?;
    for row in &report.rows {
        let Some(p) = &row.properties else { continue };
        for (m, f, v) in property_records(p) {
            w.write_record([row.level.to_string(), sig6(row.h), m.to_string(), f, sig6(v)])?;
        }
    }
    w.into_inner().map_err(|e| OutputError::Csv(e.into_error().into()))
}
