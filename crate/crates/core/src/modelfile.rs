//! Plain-text model-definition files and named presets.
//!
//! A model file is a line-oriented key/value format.  Blank lines and lines
//! starting with `#` are ignored; every other line starts with a key and is
//! split on whitespace:
//!
//! ```text
//! statistics fermion            # or: boson
//! dims 1
//! bands 1
//! extent 64                     # one length per dimension, or: infinite
//!
//! # h  <r: dims ints>  <4b^2 re/im pairs, row-major>
//! h    0    0 0   0 -0.5   0 0.5   0 0
//!
//! # ell  <s: family index>  <r: dims ints>  <2b re/im pairs>
//! ell  0  1   1 0   0 -1
//!
//! # m  <u: family index>  <r: dims ints>  <r': dims ints>  <4b^2 re/im pairs>
//! m    0  0  0   0 0   0 -0.5   0 0.5   0 0
//! ```
//!
//! `statistics`, `dims` and `bands` must appear (once each) before the first
//! coupling line; `extent` is optional and defaults to `infinite`.  Family
//! indices `s` and `u` must be contiguous from zero; repeating an index adds
//! further displacements to the same family.  Unknown keys, duplicate
//! displacements and malformed numbers are rejected with the offending line
//! number.  Hamiltonian and quadratic blocks are accepted in raw form and
//! canonicalized onto the symmetry class of the statistics.
//!
//! [`preset_stencil`] builds the two reference models by name with named
//! parameters, for front ends that do not want to ship model files.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::models::{critical_boson_stencil, xy_chain_stencil, CriticalBosonParams, XYChainParams};
use crate::stencil::{CBlock, CVec, CouplingStencil, Displacement, LatticeSpec, Statistics};

/// Parse a model definition from text.  See the module docs for the grammar.
pub fn parse_model(text: &str) -> Result<CouplingStencil> {
    let mut header = Header::default();
    let mut h: BTreeMap<Displacement, CBlock> = BTreeMap::new();
    let mut ell: BTreeMap<usize, BTreeMap<Displacement, CVec>> = BTreeMap::new();
    let mut m: BTreeMap<usize, BTreeMap<(Displacement, Displacement), CBlock>> = BTreeMap::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let text = raw_line.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let mut tokens = text.split_whitespace();
        let key = tokens.next().unwrap();
        let rest: Vec<&str> = tokens.collect();
        match key {
            "statistics" | "dims" | "bands" | "extent" => {
                header.set(key, &rest, line)?;
            }
            "h" => {
                let (dims, bands) = header.require(line)?;
                let mut pos = Cursor::new(&rest, line);
                let r = pos.displacement(dims)?;
                let blk = pos.block(bands)?;
                pos.finish()?;
                if h.insert(r.clone(), blk).is_some() {
                    return Err(parse(line, format!("duplicate h displacement {r:?}")));
                }
            }
            "ell" => {
                let (dims, bands) = header.require(line)?;
                let mut pos = Cursor::new(&rest, line);
                let s = pos.index("family index s")?;
                let r = pos.displacement(dims)?;
                let v = pos.vector(bands)?;
                pos.finish()?;
                if ell.entry(s).or_default().insert(r.clone(), v).is_some() {
                    return Err(parse(line, format!("duplicate ell displacement {r:?} in family {s}")));
                }
            }
            "m" => {
                let (dims, bands) = header.require(line)?;
                let mut pos = Cursor::new(&rest, line);
                let u = pos.index("family index u")?;
                let r = pos.displacement(dims)?;
                let rp = pos.displacement(dims)?;
                let blk = pos.block(bands)?;
                pos.finish()?;
                if m.entry(u).or_default().insert((r.clone(), rp.clone()), blk).is_some() {
                    return Err(parse(line, format!("duplicate m displacement pair in family {u}")));
                }
            }
            other => return Err(parse(line, format!("unknown key `{other}`"))),
        }
    }

    let stencil = header.into_stencil()?;
    assemble(stencil, h, ell, m)
}

/// Read and parse a model file from disk.
pub fn load_model(path: &std::path::Path) -> Result<CouplingStencil> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read model file {}: {e}", path.display())))?;
    parse_model(&text)
}

/// Serialize a stencil into the model-file format.  `parse_model` on the
/// result reproduces the stencil exactly (the stored stencils are already
/// canonical, so the raw-input projection is the identity on them).
pub fn format_model(stencil: &CouplingStencil) -> String {
    let mut out = String::new();
    let push_num = |out: &mut String, v: f64| {
        out.push(' ');
        out.push_str(&format!("{v:.17e}"));
    };
    let push_disp = |out: &mut String, r: &[i64]| {
        for c in r {
            out.push_str(&format!(" {c}"));
        }
    };
    out.push_str(&format!(
        "statistics {}\n",
        match stencil.statistics {
            Statistics::Fermion => "fermion",
            Statistics::Boson => "boson",
        }
    ));
    let lat = &stencil.lattice;
    out.push_str(&format!("dims {}\nbands {}\nextent", lat.dims, lat.bands));
    match lat.shape() {
        Ok(shape) => {
            for l in shape {
                out.push_str(&format!(" {l}"));
            }
        }
        Err(_) => out.push_str(" infinite"),
    }
    out.push('\n');
    for (r, blk) in stencil.hamiltonian() {
        out.push('h');
        push_disp(&mut out, r);
        for i in 0..blk.nrows() {
            for j in 0..blk.ncols() {
                push_num(&mut out, blk[(i, j)].re);
                push_num(&mut out, blk[(i, j)].im);
            }
        }
        out.push('\n');
    }
    for (s, fam) in stencil.lindblad_families().iter().enumerate() {
        for (r, v) in fam {
            out.push_str(&format!("ell {s}"));
            push_disp(&mut out, r);
            for e in v.iter() {
                push_num(&mut out, e.re);
                push_num(&mut out, e.im);
            }
            out.push('\n');
        }
    }
    for (u, fam) in stencil.quadratic_families().iter().enumerate() {
        for ((r, rp), blk) in fam {
            out.push_str(&format!("m {u}"));
            push_disp(&mut out, r);
            push_disp(&mut out, rp);
            for i in 0..blk.nrows() {
                for j in 0..blk.ncols() {
                    push_num(&mut out, blk[(i, j)].re);
                    push_num(&mut out, blk[(i, j)].im);
                }
            }
            out.push('\n');
        }
    }
    out
}

/// Build one of the reference models by name.  Known presets:
///
/// * `xy_chain` — dissipative XY spin chain in its fermionic form;
///   parameters `mu`, `alpha`, `eta`, `phi`, `zeta` (defaults as in the
///   model constructor), plus optional `extent` for a finite ring.
/// * `critical_boson` — purely dissipative critical boson lattice;
///   parameters `dims` (default 1), `eta` (default 1), optional `extent`
///   (applied to every axis).
///
/// Unknown preset names and unknown parameter keys are rejected.
pub fn preset_stencil(name: &str, params: &BTreeMap<String, f64>) -> Result<CouplingStencil> {
    let take = |allowed: &[&str]| -> Result<()> {
        for key in params.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Invalid(format!(
                    "unknown parameter `{key}` for preset `{name}` (allowed: {allowed:?})"
                )));
            }
        }
        Ok(())
    };
    let extent_of = |dims: usize| -> Result<Option<Vec<usize>>> {
        match params.get("extent") {
            None => Ok(None),
            Some(&l) => {
                if l < 1.0 || l.fract() != 0.0 {
                    return Err(Error::Invalid(format!("extent must be a positive integer, got {l}")));
                }
                Ok(Some(vec![l as usize; dims]))
            }
        }
    };
    match name {
        "xy_chain" => {
            take(&["mu", "alpha", "eta", "phi", "zeta", "extent"])?;
            let d = XYChainParams::default();
            let p = XYChainParams {
                mu: *params.get("mu").unwrap_or(&d.mu),
                alpha: *params.get("alpha").unwrap_or(&d.alpha),
                eta: *params.get("eta").unwrap_or(&d.eta),
                phi: *params.get("phi").unwrap_or(&d.phi),
                zeta: *params.get("zeta").unwrap_or(&d.zeta),
            };
            if p.eta < 0.0 {
                return Err(Error::NegativeRate { rate: p.eta });
            }
            if p.zeta < 0.0 {
                return Err(Error::NegativeRate { rate: p.zeta });
            }
            let mut s = xy_chain_stencil(&p);
            if let Some(shape) = extent_of(1)? {
                s.lattice = LatticeSpec::finite(&shape, s.lattice.bands);
            }
            Ok(s)
        }
        "critical_boson" => {
            take(&["dims", "eta", "extent"])?;
            let dims = *params.get("dims").unwrap_or(&1.0);
            if dims < 1.0 || dims.fract() != 0.0 {
                return Err(Error::Invalid(format!("dims must be a positive integer, got {dims}")));
            }
            let p = CriticalBosonParams { dims: dims as usize, eta: *params.get("eta").unwrap_or(&1.0) };
            if p.eta < 0.0 {
                return Err(Error::NegativeRate { rate: p.eta });
            }
            let mut s = critical_boson_stencil(&p);
            if let Some(shape) = extent_of(p.dims)? {
                s.lattice = LatticeSpec::finite(&shape, s.lattice.bands);
            }
            Ok(s)
        }
        other => Err(Error::Invalid(format!(
            "unknown preset `{other}` (known: xy_chain, critical_boson)"
        ))),
    }
}

fn parse(line: usize, message: String) -> Error {
    Error::Parse { line, message }
}

#[derive(Default)]
struct Header {
    statistics: Option<Statistics>,
    dims: Option<usize>,
    bands: Option<usize>,
    extent: Option<Option<Vec<usize>>>,
}

impl Header {
    fn set(&mut self, key: &str, rest: &[&str], line: usize) -> Result<()> {
        match key {
            "statistics" => {
                let value = match rest {
                    ["fermion"] => Statistics::Fermion,
                    ["boson"] => Statistics::Boson,
                    _ => return Err(parse(line, "statistics must be `fermion` or `boson`".into())),
                };
                if self.statistics.replace(value).is_some() {
                    return Err(parse(line, "duplicate `statistics`".into()));
                }
            }
            "dims" | "bands" => {
                let value: usize = match rest {
                    [tok] => tok
                        .parse()
                        .ok()
                        .filter(|&v| v >= 1)
                        .ok_or_else(|| parse(line, format!("`{key}` must be a positive integer")))?,
                    _ => return Err(parse(line, format!("`{key}` takes exactly one integer"))),
                };
                let slot = if key == "dims" { &mut self.dims } else { &mut self.bands };
                if slot.replace(value).is_some() {
                    return Err(parse(line, format!("duplicate `{key}`")));
                }
            }
            "extent" => {
                let value = if rest == ["infinite"] {
                    None
                } else {
                    let dims = self
                        .dims
                        .ok_or_else(|| parse(line, "`extent` requires `dims` first".into()))?;
                    if rest.len() != dims {
                        return Err(parse(line, format!("`extent` needs {dims} lengths or `infinite`")));
                    }
                    let mut shape = Vec::with_capacity(dims);
                    for tok in rest {
                        let l: usize = tok
                            .parse()
                            .ok()
                            .filter(|&v| v >= 1)
                            .ok_or_else(|| parse(line, format!("bad extent `{tok}`")))?;
                        shape.push(l);
                    }
                    Some(shape)
                };
                if self.extent.replace(value).is_some() {
                    return Err(parse(line, "duplicate `extent`".into()));
                }
            }
            _ => unreachable!("caller dispatches only header keys"),
        }
        Ok(())
    }

    fn require(&self, line: usize) -> Result<(usize, usize)> {
        match (self.statistics, self.dims, self.bands) {
            (Some(_), Some(d), Some(b)) => Ok((d, b)),
            _ => Err(parse(
                line,
                "`statistics`, `dims` and `bands` must appear before coupling lines".into(),
            )),
        }
    }

    fn into_stencil(self) -> Result<CouplingStencil> {
        let statistics = self
            .statistics
            .ok_or_else(|| parse(0, "missing `statistics`".into()))?;
        let dims = self.dims.ok_or_else(|| parse(0, "missing `dims`".into()))?;
        let bands = self.bands.ok_or_else(|| parse(0, "missing `bands`".into()))?;
        let lattice = match self.extent.flatten() {
            Some(shape) => LatticeSpec::finite(&shape, bands),
            None => LatticeSpec::infinite(dims, bands),
        };
        Ok(CouplingStencil::new(statistics, lattice))
    }
}

fn assemble(
    mut stencil: CouplingStencil,
    h: BTreeMap<Displacement, CBlock>,
    ell: BTreeMap<usize, BTreeMap<Displacement, CVec>>,
    m: BTreeMap<usize, BTreeMap<(Displacement, Displacement), CBlock>>,
) -> Result<CouplingStencil> {
    stencil.set_hamiltonian_raw(h);
    for (expected, (s, fam)) in ell.into_iter().enumerate() {
        if s != expected {
            return Err(Error::Invalid(format!(
                "ell family indices must be contiguous from 0; missing family {expected}"
            )));
        }
        stencil.add_lindblad_family(fam);
    }
    for (expected, (u, fam)) in m.into_iter().enumerate() {
        if u != expected {
            return Err(Error::Invalid(format!(
                "m family indices must be contiguous from 0; missing family {expected}"
            )));
        }
        stencil.add_quadratic_family_raw(fam);
    }
    Ok(stencil)
}

/// Token cursor over one coupling line, tracking the line number for errors.
struct Cursor<'a> {
    tokens: &'a [&'a str],
    at: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(tokens: &'a [&'a str], line: usize) -> Self {
        Cursor { tokens, at: 0, line }
    }

    fn next(&mut self, what: &str) -> Result<&'a str> {
        let tok = self
            .tokens
            .get(self.at)
            .ok_or_else(|| parse(self.line, format!("line ends before {what}")))?;
        self.at += 1;
        Ok(tok)
    }

    fn index(&mut self, what: &str) -> Result<usize> {
        let tok = self.next(what)?;
        tok.parse()
            .map_err(|_| parse(self.line, format!("bad {what} `{tok}`")))
    }

    fn float(&mut self, what: &str) -> Result<f64> {
        let tok = self.next(what)?;
        tok.parse()
            .map_err(|_| parse(self.line, format!("bad number `{tok}` in {what}")))
    }

    fn displacement(&mut self, dims: usize) -> Result<Displacement> {
        let mut r = Vec::with_capacity(dims);
        for _ in 0..dims {
            let tok = self.next("displacement")?;
            let c: i64 = tok
                .parse()
                .map_err(|_| parse(self.line, format!("bad displacement component `{tok}`")))?;
            r.push(c);
        }
        Ok(r)
    }

    fn complex(&mut self, what: &str) -> Result<Complex64> {
        let re = self.float(what)?;
        let im = self.float(what)?;
        Ok(Complex64::new(re, im))
    }

    fn block(&mut self, bands: usize) -> Result<CBlock> {
        let n = 2 * bands;
        let mut blk = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                blk[(i, j)] = self.complex("matrix entries")?;
            }
        }
        Ok(blk)
    }

    fn vector(&mut self, bands: usize) -> Result<CVec> {
        let n = 2 * bands;
        let mut v = DVector::zeros(n);
        for i in 0..n {
            v[i] = self.complex("vector entries")?;
        }
        Ok(v)
    }

    fn finish(&self) -> Result<()> {
        if self.at != self.tokens.len() {
            return Err(parse(
                self.line,
                format!("{} trailing tokens on line", self.tokens.len() - self.at),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::build_momentum;
    use crate::models::{critical_boson_stencil, xy_chain_stencil};
    use std::f64::consts::PI;

    fn cmax(m: &CBlock) -> f64 {
        m.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    fn max_map_diff(a: &BTreeMap<Displacement, CBlock>, b: &BTreeMap<Displacement, CBlock>) -> f64 {
        assert_eq!(a.keys().collect::<Vec<_>>(), b.keys().collect::<Vec<_>>());
        a.iter().map(|(r, blk)| cmax(&(blk - &b[r]))).fold(0.0, f64::max)
    }

    #[test]
    fn xy_chain_stencil_round_trips_through_the_text_format() {
        let p = XYChainParams { zeta: 0.25, alpha: 0.2, ..Default::default() };
        let s = xy_chain_stencil(&p);
        let back = parse_model(&format_model(&s)).unwrap();
        assert_eq!(back.statistics, s.statistics);
        assert_eq!(back.lattice.dims, 1);
        assert!(max_map_diff(back.hamiltonian(), s.hamiltonian()) < 1e-15);
        assert_eq!(back.lindblad_families().len(), s.lindblad_families().len());
        for (fa, fb) in back.lindblad_families().iter().zip(s.lindblad_families()) {
            for (r, v) in fa {
                assert!((v - &fb[r]).iter().map(|e| e.norm()).fold(0.0, f64::max) < 1e-15);
            }
        }
        assert_eq!(back.quadratic_families().len(), 1);
        for (fa, fb) in back.quadratic_families().iter().zip(s.quadratic_families()) {
            for (key, blk) in fa {
                assert!(cmax(&(blk - &fb[key])) < 1e-15);
            }
        }
    }

    #[test]
    fn hand_written_boson_file_matches_the_preset_momentum_blocks() {
        // Critical boson at D = 1, η = 1: single family
        // ℓ(0) = (η+2, i)/√2·√? — easiest to compare against the constructor.
        let reference = critical_boson_stencil(&CriticalBosonParams { dims: 1, eta: 1.5 });
        let mut text = String::from("statistics boson\ndims 1\nbands 1\nextent infinite\n");
        for (s, fam) in reference.lindblad_families().iter().enumerate() {
            for (r, v) in fam {
                text.push_str(&format!(
                    "ell {s} {} {} {} {} {}\n",
                    r[0], v[0].re, v[0].im, v[1].re, v[1].im
                ));
            }
        }
        let parsed = parse_model(&text).unwrap();
        for ik in 0..7 {
            let k = [2.0 * PI * ik as f64 / 7.0];
            let (xa, ya) = build_momentum(&parsed, &k).unwrap();
            let (xb, yb) = build_momentum(&reference, &k).unwrap();
            assert!(cmax(&(xa - xb)) < 1e-12 && cmax(&(ya - yb)) < 1e-12);
        }
    }

    #[test]
    fn unknown_keys_are_rejected_with_the_line_number() {
        let text = "statistics fermion\ndims 1\nbands 1\nhopping 1 0\n";
        match parse_model(text) {
            Err(Error::Parse { line: 4, message }) => assert!(message.contains("hopping")),
            other => panic!("expected parse error on line 4, got {other:?}"),
        }
    }

    #[test]
    fn coupling_lines_before_the_header_are_rejected() {
        let text = "h 0 0 0 0 0 0 0 0 0\n";
        assert!(matches!(parse_model(text), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn wrong_entry_counts_are_rejected() {
        let short = "statistics fermion\ndims 1\nbands 1\nh 0 0 0 0 -0.5\n";
        assert!(matches!(parse_model(short), Err(Error::Parse { line: 4, .. })));
        let long = "statistics fermion\ndims 1\nbands 1\nell 0 0 1 0 0 0 9\n";
        assert!(matches!(parse_model(long), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn duplicate_displacements_and_headers_are_rejected() {
        let dup_h = "statistics fermion\ndims 1\nbands 1\n\
                     h 0 0 0 0 -0.5 0 0.5 0 0\nh 0 0 0 0 -0.5 0 0.5 0 0\n";
        assert!(matches!(parse_model(dup_h), Err(Error::Parse { line: 5, .. })));
        let dup_bands = "statistics fermion\ndims 1\nbands 1\nbands 1\n";
        assert!(matches!(parse_model(dup_bands), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn missing_family_indices_are_rejected() {
        let text = "statistics fermion\ndims 1\nbands 1\nell 1 0 1 0 0 0\n";
        assert!(matches!(parse_model(text), Err(Error::Invalid(_))));
    }

    #[test]
    fn comments_blank_lines_and_finite_extent_parse() {
        let text = "# a ring of 12 cells\nstatistics boson\n\ndims 1\nbands 1\nextent 12 # periodic\n";
        let s = parse_model(text).unwrap();
        assert_eq!(s.lattice.shape().unwrap(), &[12]);
        assert_eq!(s.statistics, Statistics::Boson);
    }

    #[test]
    fn preset_matches_the_model_constructor() {
        let mut params = BTreeMap::new();
        params.insert("zeta".to_string(), 0.25);
        params.insert("alpha".to_string(), 0.2);
        let s = preset_stencil("xy_chain", &params).unwrap();
        let want = xy_chain_stencil(&XYChainParams { zeta: 0.25, alpha: 0.2, ..Default::default() });
        assert!(max_map_diff(s.hamiltonian(), want.hamiltonian()) < 1e-15);
        assert_eq!(s.lindblad_families().len(), want.lindblad_families().len());
    }

    #[test]
    fn preset_rejects_unknown_names_and_parameters() {
        assert!(matches!(preset_stencil("ising", &BTreeMap::new()), Err(Error::Invalid(_))));
        let mut params = BTreeMap::new();
        params.insert("coupling".to_string(), 1.0);
        assert!(matches!(preset_stencil("xy_chain", &params), Err(Error::Invalid(_))));
        params.clear();
        params.insert("eta".to_string(), -1.0);
        assert!(matches!(
            preset_stencil("critical_boson", &params),
            Err(Error::NegativeRate { .. })
        ));
    }

    #[test]
    fn preset_extent_yields_a_finite_lattice() {
        let mut params = BTreeMap::new();
        params.insert("dims".to_string(), 2.0);
        params.insert("extent".to_string(), 16.0);
        let s = preset_stencil("critical_boson", &params).unwrap();
        assert_eq!(s.lattice.shape().unwrap(), &[16, 16]);
    }
}
