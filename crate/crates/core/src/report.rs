//! Deterministic text serialization of analysis results.
//!
//! Every artifact carries a metadata block — the command configuration, the
//! library version and the solver residuals — so a data file is
//! self-describing.  Two formats are supported:
//!
//! * CSV: `# key: value` header lines followed by a column-name row and data
//!   rows; floats are printed with 10 significant digits;
//! * JSON: a single object with a `meta` member and the payload; floats are
//!   printed with 17 significant digits (exact round trip for f64).
//!
//! The output is a pure function of the inputs — no clocks, locales or
//! randomness — so identical runs produce byte-identical files.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::decay::DecayFit;
use crate::error::{Error, Result};
use crate::lattice::coords_of;
use crate::spectral::GapCurve;
use crate::steady::CovarianceField;
use crate::stencil::Statistics;

/// Version of the library that produced an artifact.
pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Output format of an artifact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Self-description embedded in every artifact: what was run, on which
/// model, with which numerical quality.
#[derive(Clone, Debug, Default)]
pub struct Metadata {
    /// Command or analysis name.
    pub command: String,
    /// Model source (file path or preset with parameters).
    pub model: String,
    /// Named solver residuals and tolerances.
    pub residuals: BTreeMap<String, f64>,
    /// Further configuration entries (grid sizes, windows, …).
    pub config: BTreeMap<String, String>,
}

impl Metadata {
    pub fn new(command: &str, model: &str) -> Self {
        Metadata { command: command.to_string(), model: model.to_string(), ..Default::default() }
    }

    fn header_lines(&self) -> Vec<(String, String)> {
        let mut lines = vec![
            ("command".to_string(), self.command.clone()),
            ("model".to_string(), self.model.clone()),
            ("version".to_string(), LIBRARY_VERSION.to_string()),
        ];
        for (k, v) in &self.config {
            lines.push((k.clone(), v.clone()));
        }
        for (k, v) in &self.residuals {
            lines.push((k.clone(), csv_f64(*v)));
        }
        lines
    }

    fn to_json(&self) -> JsonValue {
        let mut obj = vec![
            ("command".to_string(), JsonValue::Str(self.command.clone())),
            ("model".to_string(), JsonValue::Str(self.model.clone())),
            ("version".to_string(), JsonValue::Str(LIBRARY_VERSION.to_string())),
        ];
        if !self.config.is_empty() {
            let cfg = self
                .config
                .iter()
                .map(|(k, v)| (k.clone(), JsonValue::Str(v.clone())))
                .collect();
            obj.push(("config".to_string(), JsonValue::Object(cfg)));
        }
        if !self.residuals.is_empty() {
            let res = self
                .residuals
                .iter()
                .map(|(k, v)| (k.clone(), JsonValue::Num(*v)))
                .collect();
            obj.push(("residuals".to_string(), JsonValue::Object(res)));
        }
        JsonValue::Object(obj)
    }
}

/// Decay analysis of one model: spatial modes, analytic poles, the
/// correlation-length bound per axis, and an optional fit to numerical data.
#[derive(Clone, Debug)]
pub struct DecayReport {
    /// Decay modes β with |β| ≤ 1 + tol (transfer matrix / pencil).
    pub modes: Vec<Complex64>,
    /// Interior poles ζ of the continued γ̃(z).
    pub poles: Vec<Complex64>,
    /// Correlation-length bounds ξ_a per requested axis.
    pub xi_bounds: Vec<f64>,
    /// Exponential fit to numerical correlation data, if performed.
    pub fit: Option<DecayFit>,
}

impl DecayReport {
    /// Assemble a report, checking its defining invariants: every ξ_a ≥ 0
    /// and the fitted rate does not exceed the largest mode modulus beyond
    /// the fit tolerance.
    pub fn new(
        modes: Vec<Complex64>,
        poles: Vec<Complex64>,
        xi_bounds: Vec<f64>,
        fit: Option<DecayFit>,
    ) -> Result<Self> {
        if let Some(&bad) = xi_bounds.iter().find(|&&xi| !(xi >= 0.0)) {
            return Err(Error::Invalid(format!("correlation-length bound must be >= 0, got {bad}")));
        }
        if let Some(f) = &fit {
            let max_mode = modes.iter().map(|b| b.norm()).fold(0.0, f64::max);
            if !modes.is_empty() && f.rate.abs() > max_mode + 0.05 {
                return Err(Error::Invalid(format!(
                    "fitted rate {} exceeds the largest decay-mode modulus {max_mode}",
                    f.rate
                )));
            }
        }
        Ok(DecayReport { modes, poles, xi_bounds, fit })
    }
}

/// Serialize a covariance field: one row per lattice point, displacement (or
/// momentum) components first, then the 2b×2b block entries row-major.
/// Real-space data is preferred when both representations are present.
pub fn render_covariance(field: &CovarianceField, meta: &Metadata, format: Format) -> Result<String> {
    let nb = 2 * field.bands;
    let statistics = match field.statistics {
        Statistics::Fermion => "fermion",
        Statistics::Boson => "boson",
    };
    let mut meta = meta.clone();
    meta.config.insert("statistics".to_string(), statistics.to_string());
    meta.config.insert(
        "grid".to_string(),
        field.shape.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("x"),
    );
    meta.residuals.insert("residual".to_string(), field.residual);
    meta.residuals.insert("translation_deviation".to_string(), field.translation_deviation);

    // (representation name, coordinate labels, rows of (coords, entries)).
    let (space, rows): (&str, Vec<(Vec<f64>, Vec<(f64, f64)>)>) = if let Some(rs) = &field.real_space
    {
        let rows = rs
            .iter()
            .enumerate()
            .map(|(i, blk)| {
                let coords = coords_of(i, &field.shape).iter().map(|&c| c as f64).collect();
                let entries = (0..nb)
                    .flat_map(|a| (0..nb).map(move |b| (a, b)))
                    .map(|(a, b)| (blk[(a, b)], 0.0))
                    .collect();
                (coords, entries)
            })
            .collect();
        ("real", rows)
    } else if let Some(ms) = &field.momentum_space {
        let rows = (0..ms.len())
            .map(|i| {
                let entries = (0..nb)
                    .flat_map(|a| (0..nb).map(move |b| (a, b)))
                    .map(|(a, b)| (ms[i][(a, b)].re, ms[i][(a, b)].im))
                    .collect();
                (field.k_at(i), entries)
            })
            .collect();
        ("momentum", rows)
    } else {
        return Err(Error::MissingRepresentation);
    };
    let complex_entries = space == "momentum";
    meta.config.insert("space".to_string(), space.to_string());

    match format {
        Format::Csv => {
            let mut out = csv_header(&meta);
            let mut columns: Vec<String> =
                (0..field.shape.len()).map(|a| format!("{}{}", if complex_entries { "k" } else { "r" }, a)).collect();
            for a in 0..nb {
                for b in 0..nb {
                    if complex_entries {
                        columns.push(format!("re_g{a}{b}"));
                        columns.push(format!("im_g{a}{b}"));
                    } else {
                        columns.push(format!("g{a}{b}"));
                    }
                }
            }
            out.push_str(&columns.join(","));
            out.push('\n');
            for (coords, entries) in &rows {
                let mut cells: Vec<String> = coords.iter().map(|&c| csv_f64(c)).collect();
                for &(re, im) in entries {
                    cells.push(csv_f64(re));
                    if complex_entries {
                        cells.push(csv_f64(im));
                    }
                }
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            Ok(out)
        }
        Format::Json => {
            let points = rows
                .into_iter()
                .map(|(coords, entries)| {
                    let flat: Vec<JsonValue> = entries
                        .into_iter()
                        .flat_map(|(re, im)| {
                            if complex_entries {
                                vec![JsonValue::Num(re), JsonValue::Num(im)]
                            } else {
                                vec![JsonValue::Num(re)]
                            }
                        })
                        .collect();
                    JsonValue::Object(vec![
                        (
                            (if complex_entries { "k" } else { "r" }).to_string(),
                            JsonValue::Array(coords.into_iter().map(JsonValue::Num).collect()),
                        ),
                        ("gamma".to_string(), JsonValue::Array(flat)),
                    ])
                })
                .collect();
            let root = JsonValue::Object(vec![
                ("meta".to_string(), meta.to_json()),
                ("points".to_string(), JsonValue::Array(points)),
            ]);
            Ok(root.render())
        }
    }
}

/// Serialize a gap curve: two-column text (parameter, gap) in CSV, with the
/// maximizing momentum per sample carried in the JSON form.
pub fn render_gap_curve(curve: &GapCurve, meta: &Metadata, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = csv_header(meta);
            out.push_str("parameter,gap\n");
            for (t, g) in curve.parameters.iter().zip(&curve.gaps) {
                out.push_str(&format!("{},{}\n", csv_f64(*t), csv_f64(*g)));
            }
            out
        }
        Format::Json => {
            let samples = curve
                .parameters
                .iter()
                .zip(&curve.gaps)
                .zip(&curve.argmax_k)
                .map(|((&t, &g), k)| {
                    JsonValue::Object(vec![
                        ("parameter".to_string(), JsonValue::Num(t)),
                        ("gap".to_string(), JsonValue::Num(g)),
                        (
                            "argmax_k".to_string(),
                            JsonValue::Array(k.iter().map(|&v| JsonValue::Num(v)).collect()),
                        ),
                    ])
                })
                .collect();
            JsonValue::Object(vec![
                ("meta".to_string(), meta.to_json()),
                ("samples".to_string(), JsonValue::Array(samples)),
            ])
            .render()
        }
    }
}

/// Serialize a decay report.  JSON is the primary format (modes and poles as
/// re/im pairs, ξ bounds, fit parameters); the CSV form tabulates the modes.
pub fn render_decay(report: &DecayReport, meta: &Metadata, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = csv_header(meta);
            if let Some(f) = &report.fit {
                out.push_str(&format!("# fit_rate: {}\n", csv_f64(f.rate)));
                out.push_str(&format!("# fit_prefactor: {}\n", csv_f64(f.prefactor)));
                out.push_str(&format!("# fit_rms: {}\n", csv_f64(f.rms)));
            }
            for (i, xi) in report.xi_bounds.iter().enumerate() {
                out.push_str(&format!("# xi_{i}: {}\n", csv_f64(*xi)));
            }
            out.push_str("kind,re,im,modulus\n");
            for b in &report.modes {
                out.push_str(&format!("mode,{},{},{}\n", csv_f64(b.re), csv_f64(b.im), csv_f64(b.norm())));
            }
            for z in &report.poles {
                out.push_str(&format!("pole,{},{},{}\n", csv_f64(z.re), csv_f64(z.im), csv_f64(z.norm())));
            }
            out
        }
        Format::Json => {
            let complex_list = |values: &[Complex64]| {
                JsonValue::Array(
                    values
                        .iter()
                        .map(|z| {
                            JsonValue::Object(vec![
                                ("re".to_string(), JsonValue::Num(z.re)),
                                ("im".to_string(), JsonValue::Num(z.im)),
                            ])
                        })
                        .collect(),
                )
            };
            let mut obj = vec![
                ("meta".to_string(), meta.to_json()),
                ("modes".to_string(), complex_list(&report.modes)),
                ("poles".to_string(), complex_list(&report.poles)),
                (
                    "xi_bounds".to_string(),
                    JsonValue::Array(report.xi_bounds.iter().map(|&v| JsonValue::Num(v)).collect()),
                ),
            ];
            if let Some(f) = &report.fit {
                obj.push((
                    "fit".to_string(),
                    JsonValue::Object(vec![
                        ("rate".to_string(), JsonValue::Num(f.rate)),
                        ("prefactor".to_string(), JsonValue::Num(f.prefactor)),
                        ("rms".to_string(), JsonValue::Num(f.rms)),
                        ("envelope".to_string(), JsonValue::Bool(f.envelope)),
                    ]),
                ));
            }
            JsonValue::Object(obj).render()
        }
    }
}

/// Generic column table, for figure datasets: named columns of equal length.
pub fn render_table(columns: &[(&str, Vec<f64>)], meta: &Metadata, format: Format) -> String {
    let len = columns.first().map_or(0, |(_, v)| v.len());
    assert!(columns.iter().all(|(_, v)| v.len() == len), "table columns must have equal length");
    match format {
        Format::Csv => {
            let mut out = csv_header(meta);
            out.push_str(&columns.iter().map(|(n, _)| n.to_string()).collect::<Vec<_>>().join(","));
            out.push('\n');
            for i in 0..len {
                let row: Vec<String> = columns.iter().map(|(_, v)| csv_f64(v[i])).collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let cols = columns
                .iter()
                .map(|(n, v)| {
                    (n.to_string(), JsonValue::Array(v.iter().map(|&x| JsonValue::Num(x)).collect()))
                })
                .collect();
            JsonValue::Object(vec![
                ("meta".to_string(), meta.to_json()),
                ("columns".to_string(), JsonValue::Object(cols)),
            ])
            .render()
        }
    }
}

/// Machine-readable error artifact for front ends.
pub fn render_error(err: &Error) -> String {
    JsonValue::Object(vec![
        ("error".to_string(), JsonValue::Str(err.name().to_string())),
        ("message".to_string(), JsonValue::Str(err.to_string())),
    ])
    .render()
}

/// CSV float format: 10 significant digits.
pub fn csv_f64(v: f64) -> String {
    format!("{v:.9e}")
}

/// JSON float format: 17 significant digits (lossless for f64).
pub fn json_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        // JSON has no literal for non-finite numbers.
        "null".to_string()
    }
}

fn csv_header(meta: &Metadata) -> String {
    let mut out = String::new();
    for (k, v) in meta.header_lines() {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    out
}

/// Minimal JSON document builder with pinned float formatting; field order
/// is preserved exactly as constructed.
enum JsonValue {
    Num(f64),
    Bool(bool),
    Str(String),
    Array(Vec<JsonValue>),
    Object(Vec<(String, JsonValue)>),
}

impl JsonValue {
    fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, depth: usize) {
        match self {
            JsonValue::Num(v) => out.push_str(&json_f64(*v)),
            JsonValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            JsonValue::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\t' => out.push_str("\\t"),
                        c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            JsonValue::Array(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.write(out, depth + 1);
                }
                out.push(']');
            }
            JsonValue::Object(fields) => {
                out.push('{');
                let pad = "  ".repeat(depth + 1);
                for (i, (key, value)) in fields.iter().enumerate() {
                    out.push_str(if i > 0 { ",\n" } else { "\n" });
                    out.push_str(&pad);
                    out.push('"');
                    out.push_str(key);
                    out.push_str("\": ");
                    value.write(out, depth + 1);
                }
                out.push('\n');
                out.push_str(&"  ".repeat(depth));
                out.push('}');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::build_dense;
    use crate::models::{xy_chain_stencil, XYChainParams};
    use crate::spectral::GapPoint;
    use crate::steady::solve_steady_dense;

    fn small_field() -> CovarianceField {
        let s = xy_chain_stencil(&XYChainParams::default());
        solve_steady_dense(&build_dense(&s, &[8]).unwrap()).unwrap()
    }

    #[test]
    fn covariance_csv_has_header_column_names_and_data_rows() {
        let field = small_field();
        let meta = Metadata::new("steady", "preset:xy_chain");
        let out = render_covariance(&field, &meta, Format::Csv).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines.iter().any(|l| l.starts_with("# command: steady")));
        assert!(lines.iter().any(|l| l.starts_with("# version: ")));
        assert!(lines.iter().any(|l| l.starts_with("# residual: ")));
        let header = lines.iter().find(|l| l.starts_with("r0,")).unwrap();
        assert_eq!(header.split(',').count(), 1 + 4);
        let data_rows = lines.iter().filter(|l| !l.starts_with('#') && !l.starts_with("r0,")).count();
        assert_eq!(data_rows, 8);
    }

    #[test]
    fn covariance_csv_values_round_trip_to_ten_digits() {
        let field = small_field();
        let out = render_covariance(&field, &Metadata::new("steady", "m"), Format::Csv).unwrap();
        let row = out.lines().find(|l| l.starts_with("1.000000000e0,")).unwrap();
        let cells: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        let blk = field.gamma(&[1]).unwrap();
        for (i, want) in [blk[(0, 0)], blk[(0, 1)], blk[(1, 0)], blk[(1, 1)]].iter().enumerate() {
            assert!((cells[1 + i] - want).abs() <= 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn covariance_json_is_valid_and_lossless() {
        let field = small_field();
        let out = render_covariance(&field, &Metadata::new("steady", "m"), Format::Json).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(parsed["meta"]["command"], "steady");
        let blk = field.gamma(&[3]).unwrap();
        let gamma = &parsed["points"][3]["gamma"];
        for (i, want) in [blk[(0, 0)], blk[(0, 1)], blk[(1, 0)], blk[(1, 1)]].iter().enumerate() {
            // 17 significant digits reproduce the f64 exactly.
            assert_eq!(gamma[i].as_f64().unwrap(), *want);
        }
    }

    #[test]
    fn momentum_only_fields_serialize_k_columns() {
        let mut field = small_field();
        let ms = crate::steady::fourier_pair(&field, crate::steady::FourierDirection::ToMomentum)
            .unwrap()
            .momentum_space;
        field.real_space = None;
        field.momentum_space = ms;
        let out = render_covariance(&field, &Metadata::new("steady", "m"), Format::Csv).unwrap();
        assert!(out.lines().any(|l| l.starts_with("k0,re_g00,im_g00")));
        field.momentum_space = None;
        assert!(matches!(
            render_covariance(&field, &Metadata::new("steady", "m"), Format::Csv),
            Err(Error::MissingRepresentation)
        ));
    }

    #[test]
    fn gap_curve_renders_two_columns_and_json_metadata() {
        let curve = GapCurve {
            parameters: vec![0.0, 0.5, 1.0],
            gaps: vec![0.1, 0.2, 0.3],
            argmax_k: vec![vec![3.14], vec![1.0], vec![2.0]],
        };
        let meta = Metadata::new("gap", "preset:xy_chain");
        let csv = render_gap_curve(&curve, &meta, Format::Csv);
        assert!(csv.contains("parameter,gap\n"));
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 4);
        let parsed: serde_json::Value =
            serde_json::from_str(&render_gap_curve(&curve, &meta, Format::Json)).unwrap();
        assert_eq!(parsed["samples"][0]["argmax_k"][0].as_f64().unwrap(), 3.14);
        let _ = GapPoint { gap: 0.1, argmax_k: vec![0.0] };
    }

    #[test]
    fn decay_report_validates_its_invariants() {
        let ok = DecayReport::new(
            vec![Complex64::new(-0.1584, 0.0)],
            vec![Complex64::new(-0.1584, 0.0)],
            vec![0.54],
            Some(DecayFit { rate: 0.158, prefactor: 0.3, rms: 1e-3, envelope: false }),
        );
        assert!(ok.is_ok());
        assert!(DecayReport::new(Vec::new(), Vec::new(), vec![-0.1], None).is_err());
        let bad_fit = DecayReport::new(
            vec![Complex64::new(0.2, 0.0)],
            Vec::new(),
            Vec::new(),
            Some(DecayFit { rate: 0.9, prefactor: 1.0, rms: 0.0, envelope: false }),
        );
        assert!(bad_fit.is_err());
    }

    #[test]
    fn decay_report_json_lists_modes_poles_and_fit() {
        let report = DecayReport::new(
            vec![Complex64::new(0.0, 0.8165)],
            vec![Complex64::new(-0.1584, 0.0)],
            vec![0.54],
            Some(DecayFit { rate: 0.5637, prefactor: 0.21, rms: 2e-3, envelope: true }),
        )
        .unwrap();
        let meta = Metadata::new("decay", "preset:xy_chain");
        let parsed: serde_json::Value =
            serde_json::from_str(&render_decay(&report, &meta, Format::Json)).unwrap();
        assert_eq!(parsed["modes"][0]["im"].as_f64().unwrap(), 0.8165);
        assert_eq!(parsed["poles"][0]["re"].as_f64().unwrap(), -0.1584);
        assert_eq!(parsed["fit"]["envelope"], serde_json::Value::Bool(true));
        let csv = render_decay(&report, &meta, Format::Csv);
        assert!(csv.contains("mode,") && csv.contains("pole,") && csv.contains("# xi_0: "));
    }

    #[test]
    fn identical_inputs_render_byte_identical_output() {
        let field = small_field();
        let meta = Metadata::new("steady", "m");
        let a = render_covariance(&field, &meta, Format::Json).unwrap();
        let b = render_covariance(&field, &meta, Format::Json).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn table_columns_align_in_both_formats() {
        let cols = [("r", vec![1.0, 2.0]), ("gamma", vec![0.1, 0.01])];
        let meta = Metadata::new("figure", "fig1-left");
        let csv = render_table(&cols, &meta, Format::Csv);
        assert!(csv.contains("r,gamma\n"));
        let parsed: serde_json::Value =
            serde_json::from_str(&render_table(&cols, &meta, Format::Json)).unwrap();
        assert_eq!(parsed["columns"]["gamma"][1].as_f64().unwrap(), 0.01);
    }
}
