use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use drinfeld_core::carlitz::{goss_mod_t_closed_form, torsion_exponential, GossTable};
use drinfeld_core::exactla::{formal_derivative, is_separable, minimal_polynomial, Matrix};
use drinfeld_core::hecke::{
    eigenform_check, hecke_matrix as build_matrix, hecke_matrix_mod_t, hecke_mod_t_on_power, required_input_precision,
    EigenVerdict, ModTCache,
};
use drinfeld_core::modforms::{monomial_basis, type_rep, BasisMonomial, FormCache};
use drinfeld_core::scan::{scan_separability, ScanConfig};
use drinfeld_core::verify::{run_suite, VerifyOptions};
use drinfeld_core::{ring_a, Fq, FqElem, Parse, PolyRing, PrimePoly, RatField, RatK, Ring, TSeries};

use crate::render::{csv_rows, json, pick, table, Output};
use crate::{FormName, Format, GlobalOpts};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] drinfeld_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        use drinfeld_core::Error as E;
        match self {
            CliError::Core(E::StructureViolation(_) | E::NotInSpan { .. }) => 1,
            _ => 2,
        }
    }
}

type Res = Result<Output, CliError>;

pub fn field(g: &GlobalOpts) -> Result<Fq, CliError> {
    let (p, r) = match (g.q, g.p, g.r) {
        (Some(q), _, _) => {
            let f = Fq::from_order(q)?;
            (f.p(), f.r())
        }
        (None, Some(p), r) => (p, r.unwrap_or(1)),
        (None, None, Some(_)) => return Err(CliError::Usage("--r requires --p".into())),
        (None, None, None) => (2, 1),
    };
    let modulus = match &g.modulus {
        None => None,
        Some(s) => {
            let fp = Fq::prime(p)?;
            let poly = PolyRing::new(fp, "u").parse_elem(s)?;
            Some(poly.coeffs().iter().map(|c| c.0).collect())
        }
    };
    Ok(Fq::new(p, r, modulus)?)
}

fn prime(fq: &Fq, s: &str) -> Result<PrimePoly, CliError> {
    Ok(PrimePoly::parse(&ring_a(fq), s)?)
}

fn check_type(fq: &Fq, m: u64) -> Result<u64, CliError> {
    let q = fq.q() as u64;
    if m != type_rep(q, m as i64) {
        return Err(CliError::Usage(format!("type m must satisfy 0 <= m < max(q-1, 1) (got {m} for q = {q})")));
    }
    Ok(m)
}

fn basis_text(b: &BasisMonomial) -> String {
    match (b.i, b.j) {
        (0, 0) => "1".into(),
        (i, 0) => format!("g^{i}"),
        (0, j) => format!("h^{j}"),
        (i, j) => format!("g^{i}*h^{j}"),
    }
}

#[derive(Serialize)]
struct SeriesOut {
    form: String,
    q: u32,
    prec: usize,
    mod_t: bool,
    coeffs: Vec<String>,
}

pub fn expand(fq: &Fq, format: Format, form: FormName, prec: usize, mod_t: bool) -> Res {
    if prec == 0 {
        return Err(CliError::Usage("--prec must be at least 1".into()));
    }
    let cache = FormCache::new(fq, prec);
    let a = cache.ring();
    let (name, f) = match form {
        FormName::G => ("g", cache.g(prec)?),
        FormName::H => ("h", cache.h(prec)?),
        FormName::E => ("E", cache.e(prec)?),
    };
    let (coeffs, display) = if mod_t {
        let s: TSeries<FqElem> = f.num().map(|c| a.eval(c, &FqElem::ZERO));
        (s.to_json(fq).coeffs, s.display(fq))
    } else {
        (f.num().to_json(a).coeffs, f.num().display(a))
    };
    let out = SeriesOut { form: name.into(), q: fq.q(), prec, mod_t, coeffs };
    let text = pick(
        format,
        || json(&out),
        || csv_rows(&["n", "coeff"], out.coeffs.iter().enumerate().map(|(n, c)| vec![n.to_string(), c.clone()])),
        || format!("{name}{} = {display}\n", if mod_t { " mod T" } else { "" }),
    )?;
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct GossOut {
    q: u32,
    prime: String,
    mod_t: bool,
    polys: Vec<GossEntry>,
}

#[derive(Serialize)]
struct GossEntry {
    n: usize,
    poly: String,
}

pub fn goss(fq: &Fq, format: Format, prime_text: &str, n: usize, upto: bool, mod_t: bool) -> Res {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let p = prime(fq, prime_text)?;
    let range = if upto { 1..=n } else { n..=n };
    let polys: Vec<GossEntry> = if mod_t {
        let x = PolyRing::new(fq.clone(), "X");
        range.map(|i| Ok(GossEntry { n: i, poly: x.fmt_elem(&goss_mod_t_closed_form(fq, &p, i)?) })).collect::<Result<_, CliError>>()?
    } else {
        let k = RatField::new(fq);
        let table = GossTable::new(&k, &torsion_exponential(&k, &p), fq.q() as u64, n)?;
        range.map(|i| GossEntry { n: i, poly: table.ring().fmt_elem(table.get(i).expect("within table")) }).collect()
    };
    let out = GossOut { q: fq.q(), prime: ring_a(fq).fmt_elem(p.poly()), mod_t, polys };
    let text = pick(
        format,
        || json(&out),
        || csv_rows(&["n", "poly"], out.polys.iter().map(|e| vec![e.n.to_string(), e.poly.clone()])),
        || {
            let suffix = if mod_t { " mod T" } else { "" };
            out.polys.iter().map(|e| format!("G_{{{},{}}} = {}{suffix}\n", e.n, out.prime, e.poly)).collect()
        },
    )?;
    Ok(Output::ok(text))
}

fn forms_for(fq: &Fq, k: u64, m: u64, p: &PrimePoly) -> Result<(FormCache, usize), CliError> {
    let q = fq.q() as u64;
    let basis = monomial_basis(q, k, m);
    let Some(j_max) = basis.last().map(|b| b.j) else {
        return Err(CliError::Usage(format!("M_{{{k},{m}}} is zero for q = {q}")));
    };
    let prec = required_input_precision(j_max, q, p.degree()).max(j_max);
    Ok((FormCache::new(fq, prec), j_max))
}

#[derive(Serialize)]
struct MatrixOut {
    q: u32,
    k: u64,
    m: u64,
    prime: String,
    mod_t: bool,
    /// Basis labels, in order.
    basis: Vec<String>,
    /// How the matrix acts: which index holds the image coordinates.
    convention: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagonal: Option<String>,
    matrix: Vec<Vec<String>>,
}

fn render_matrix(format: Format, out: &MatrixOut) -> Result<String, CliError> {
    pick(
        format,
        || json(out),
        || csv_rows(&[], out.matrix.iter().cloned()),
        || {
            let mut s = format!(
                "T_{{{}}} on M_{{{},{}}}{} (q = {}), basis [{}]\n{}\n",
                out.prime,
                out.k,
                out.m,
                if out.mod_t { " mod T" } else { "" },
                out.q,
                out.basis.join(", "),
                out.convention
            );
            s.push_str(&table(&out.matrix));
            if let Some(d) = &out.diagonal {
                s.push_str(&format!("semisimple part: {d} * I\n"));
            }
            s
        },
    )
}

pub fn hecke_matrix(fq: &Fq, format: Format, k: u64, m: u64, prime_text: &str, mod_theta: bool) -> Res {
    let m = check_type(fq, m)?;
    let p = prime(fq, prime_text)?;
    let (cache, _) = forms_for(fq, k, m, &p)?;
    let a = cache.ring();
    let out = if mod_theta {
        let mt = hecke_matrix_mod_t(&ModTCache::from_forms(&cache), k, m, &p)?;
        MatrixOut {
            q: fq.q(),
            k,
            m,
            prime: a.fmt_elem(p.poly()),
            mod_t: true,
            basis: mt.exponents.iter().map(|j| format!("h~^{j}")).collect(),
            convention: "row r = coordinates of the image of basis element r",
            diagonal: Some(fq.fmt_elem(&mt.diagonal)),
            matrix: mt.entries.rows().iter().map(|r| r.iter().map(|c| fq.fmt_elem(c)).collect()).collect(),
        }
    } else {
        let hm = build_matrix(&cache, k, m, &p)?;
        MatrixOut {
            q: fq.q(),
            k,
            m,
            prime: a.fmt_elem(p.poly()),
            mod_t: false,
            basis: hm.basis.iter().map(basis_text).collect(),
            convention: "column c = coordinates of the image of basis element c",
            diagonal: None,
            matrix: hm.entries.rows().iter().map(|r| r.iter().map(|c| a.fmt_elem(c)).collect()).collect(),
        }
    };
    Ok(Output::ok(render_matrix(format, &out)?))
}

fn load_matrix(field: &RatField, path: &Path) -> Result<Matrix<RatK>, CliError> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let rows = value.get("matrix").unwrap_or(&value);
    let bad = || CliError::Usage(format!("{}: expected an array of rows of entry strings", path.display()));
    let rows = rows.as_array().ok_or_else(bad)?;
    let parsed = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|e| Ok(field.parse_elem(e.as_str().ok_or_else(bad)?)?))
                .collect::<Result<Vec<RatK>, CliError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::new(parsed)?)
}

#[derive(Serialize)]
struct MinpolyOut {
    q: u32,
    source: String,
    dim: usize,
    minpoly: String,
    degree: usize,
    derivative: String,
    separable: bool,
}

pub fn minpoly(fq: &Fq, format: Format, k: Option<u64>, m: u64, prime_text: Option<&str>, matrix: Option<&Path>) -> Res {
    let field = RatField::new(fq);
    let (mat, source) = match (matrix, k, prime_text) {
        (Some(path), _, _) => (load_matrix(&field, path)?, path.display().to_string()),
        (None, Some(k), Some(pt)) => {
            let m = check_type(fq, m)?;
            let p = prime(fq, pt)?;
            let (cache, _) = forms_for(fq, k, m, &p)?;
            let hm = build_matrix(&cache, k, m, &p)?;
            (hm.over_k(&field), format!("T_{{{}}} on M_{{{k},{m}}}", ring_a(fq).fmt_elem(p.poly())))
        }
        _ => return Err(CliError::Usage("give --matrix FILE or --k and --prime".into())),
    };
    if mat.n() == 0 {
        return Err(CliError::Usage("empty matrix".into()));
    }
    let mu = minimal_polynomial(&field, &mat)?;
    let px = PolyRing::new(field.clone(), "X");
    let out = MinpolyOut {
        q: fq.q(),
        source,
        dim: mat.n(),
        minpoly: px.fmt_elem(&mu),
        degree: mu.degree().unwrap_or(0),
        derivative: px.fmt_elem(&formal_derivative(&px, &mu)),
        separable: is_separable(&px, &mu)?,
    };
    let text = pick(
        format,
        || json(&out),
        || {
            csv_rows(
                &["q", "source", "dim", "minpoly", "degree", "derivative", "separable"],
                [vec![
                    out.q.to_string(),
                    out.source.clone(),
                    out.dim.to_string(),
                    out.minpoly.clone(),
                    out.degree.to_string(),
                    out.derivative.clone(),
                    out.separable.to_string(),
                ]],
            )
        },
        || {
            format!(
                "{} (dimension {})\nmu(X) = {}\ndegree {}, mu'(X) = {}\n{}\n",
                out.source,
                out.dim,
                out.minpoly,
                out.degree,
                out.derivative,
                if out.separable { "separable" } else { "not separable" }
            )
        },
    )?;
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct ExactVerdict {
    eigenform: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigenvalue: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violating_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violating_basis_element: Option<String>,
}

#[derive(Serialize)]
struct ModTVerdict {
    /// `(j, c)`: coordinate `c` of the image on `h~^j`.
    coords: Vec<(usize, String)>,
    eigenform: bool,
}

#[derive(Serialize)]
struct Prediction {
    statement: String,
    holds: bool,
}

#[derive(Serialize)]
struct EigenOut {
    q: u32,
    n: usize,
    k: u64,
    m: u64,
    prime: String,
    exact: ExactVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    mod_t: Option<ModTVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_1: Option<String>,
    predictions: Vec<Prediction>,
}

pub fn eigencheck(fq: &Fq, format: Format, n: usize, prime_text: &str) -> Res {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let q = fq.q() as usize;
    let p = prime(fq, prime_text)?;
    let a = ring_a(fq);
    let field = RatField::new(fq);
    let k = (n * (q + 1)) as u64;
    let m = type_rep(q as u64, n as i64);
    let (cache, _) = forms_for(fq, k, m, &p)?;
    let hm = build_matrix(&cache, k, m, &p)?;
    let idx = hm.basis.iter().position(|b| b.i == 0 && b.j == n).expect("h^n lies in its own basis");
    let mut v = vec![field.zero(); hm.basis.len()];
    v[idx] = field.one();
    let exact = match eigenform_check(&field, &hm, &v)? {
        EigenVerdict::Eigenform { eigenvalue } => ExactVerdict {
            eigenform: true,
            eigenvalue: Some(field.fmt_elem(&eigenvalue)),
            violating_index: None,
            violating_basis_element: None,
        },
        EigenVerdict::NotEigenform { index } => ExactVerdict {
            eigenform: false,
            eigenvalue: None,
            violating_index: Some(index),
            violating_basis_element: Some(basis_text(&hm.basis[index])),
        },
    };
    let mut predictions = Vec::new();
    let pname = a.fmt_elem(p.poly());
    if n <= q {
        let expected = field.fmt_elem(&field.from_poly(a.pow(p.poly(), n as u64)));
        predictions.push(Prediction {
            statement: format!("h^{n} is an eigenform with eigenvalue ({pname})^{n}"),
            holds: exact.eigenvalue.as_deref() == Some(expected.as_str()),
        });
    }
    let (mod_t, alpha_1) = if p.is_t() {
        (None, None)
    } else {
        let mcache = ModTCache::from_forms(&cache);
        let coords = hecke_mod_t_on_power(&mcache, n, &p)?;
        let eigen = coords.iter().all(|(j, c)| *j == n || fq.is_zero(c));
        let coord = |e: usize| coords.iter().find(|(j, _)| *j == e).map_or(FqElem::ZERO, |x| x.1);
        let a1 = p.alpha_i(1);
        let d = p.degree();
        let mut alpha = None;
        if fq.is_prime_field() && n > q && n < 2 * q {
            let j = n - q;
            alpha = Some(fq.fmt_elem(&a1));
            predictions.push(Prediction {
                statement: format!("h~^{n} is an eigenform mod T iff alpha_1 = 0 (alpha_1 = {})", fq.fmt_elem(&a1)),
                holds: eigen == fq.is_zero(&a1),
            });
            let expected = fq.mul(&fq.from_int(j as i64), &fq.mul(&fq.pow(&p.residue(), j as u64), &a1));
            predictions.push(Prediction {
                statement: format!("coordinate of T_{{{pname}}} h~^{n} on h~^{} is {j} P~^{j} alpha_1", j + 1),
                holds: coord(j + 1) == expected,
            });
        }
        if fq.is_prime_field() && n > q.pow(d as u32) && n < q.pow(d as u32) + q {
            let j = n - q.pow(d as u32);
            let expected = fq.mul(&fq.from_int(j as i64), &fq.pow(&p.residue(), j as u64));
            predictions.push(Prediction {
                statement: format!("coordinate of T_{{{pname}}} h~^{n} on h~^{} is {j} P~^{j} != 0", j + 1),
                holds: coord(j + 1) == expected && !fq.is_zero(&expected),
            });
            predictions.push(Prediction { statement: format!("h^{n} is not an eigenform for T_{{{pname}}}"), holds: !exact.eigenform });
        }
        let verdict = ModTVerdict { coords: coords.iter().map(|(j, c)| (*j, fq.fmt_elem(c))).collect(), eigenform: eigen };
        (Some(verdict), alpha)
    };
    let out = EigenOut { q: fq.q(), n, k, m, prime: pname, exact, mod_t, alpha_1, predictions };
    let passed = out.predictions.iter().all(|p| p.holds);
    let text = pick(format, || json(&out), || eigen_csv(&out), || eigen_pretty(&out))?;
    Ok(Output::with_status(text, passed))
}

fn eigen_csv(out: &EigenOut) -> Result<String, CliError> {
    csv_rows(
        &["q", "n", "k", "m", "prime", "exact_eigenform", "eigenvalue", "mod_t_eigenform", "alpha_1", "predictions_hold"],
        [vec![
            out.q.to_string(),
            out.n.to_string(),
            out.k.to_string(),
            out.m.to_string(),
            out.prime.clone(),
            out.exact.eigenform.to_string(),
            out.exact.eigenvalue.clone().unwrap_or_default(),
            out.mod_t.as_ref().map_or(String::new(), |v| v.eigenform.to_string()),
            out.alpha_1.clone().unwrap_or_default(),
            out.predictions.iter().all(|p| p.holds).to_string(),
        ]],
    )
}

fn eigen_pretty(out: &EigenOut) -> String {
    let mut s = format!("h^{} in M_{{{},{}}}, P = {} (q = {})\n", out.n, out.k, out.m, out.prime, out.q);
    match (&out.exact.eigenvalue, &out.exact.violating_basis_element) {
        (Some(ev), _) => s.push_str(&format!("exact: eigenform, eigenvalue {ev}\n")),
        (None, Some(b)) => s.push_str(&format!(
            "exact: not an eigenform (image has a nonzero coordinate on {b}, index {})\n",
            out.exact.violating_index.unwrap_or(0)
        )),
        _ => {}
    }
    if let Some(mt) = &out.mod_t {
        let terms: Vec<String> = mt.coords.iter().filter(|(_, c)| c != "0").map(|(j, c)| format!("{c}*h~^{j}")).collect();
        let image = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        s.push_str(&format!(
            "mod T: T_{{{}}} h~^{} = {image}  ({})\n",
            out.prime,
            out.n,
            if mt.eigenform { "eigenform mod T" } else { "not an eigenform mod T" }
        ));
    }
    if let Some(a1) = &out.alpha_1 {
        s.push_str(&format!("alpha_1 = {a1}\n"));
    }
    for p in &out.predictions {
        s.push_str(&format!("[{}] {}\n", if p.holds { "ok" } else { "MISMATCH" }, p.statement));
    }
    s
}

pub fn scan(fq: &Fq, format: Format, k_max: u64, prime_deg_max: usize, m: u64, jobs: usize) -> Res {
    let m = check_type(fq, m)?;
    if prime_deg_max == 0 {
        return Err(CliError::Usage("--prime-deg-max must be at least 1".into()));
    }
    let report = scan_separability(fq, &ScanConfig { k_max, prime_deg_max, m, jobs })?;
    let text = pick(format, || report.to_json() + "\n", || Ok(report.to_csv()?), || report.to_pretty())?;
    Ok(Output::with_status(text, report.failures() == 0))
}

pub fn verify(fq: &Fq, format: Format, suite: &str, prec: Option<usize>, max_prime_degree: Option<usize>, k_max: Option<u64>) -> Res {
    let opts = VerifyOptions { prec, max_prime_degree, k_max };
    let reports = run_suite(suite, fq, &opts)?;
    let passed = reports.iter().all(|r| r.passed());
    let text = pick(
        format,
        || json(&reports),
        || {
            csv_rows(
                &["suite", "q", "check", "passed", "detail"],
                reports.iter().flat_map(|r| {
                    r.checks.iter().map(move |c| vec![r.suite.clone(), r.q.to_string(), c.name.clone(), c.passed.to_string(), c.detail.clone()])
                }),
            )
        },
        || {
            let mut s = String::new();
            for r in &reports {
                for c in &r.checks {
                    let detail = if c.detail.is_empty() { String::new() } else { format!("  ({})", c.detail) };
                    s.push_str(&format!("{} [{}] {}{detail}\n", if c.passed { "PASS" } else { "FAIL" }, r.suite, c.name));
                }
            }
            let total: usize = reports.iter().map(|r| r.checks.len()).sum();
            let failed: usize = reports.iter().map(|r| r.failures().count()).sum();
            s.push_str(&format!("{}: {} of {total} checks passed (q = {})\n", if passed { "PASS" } else { "FAIL" }, total - failed, fq.q()));
            s
        },
    )?;
    Ok(Output::with_status(text, passed))
}
