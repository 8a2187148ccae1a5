//! Python bindings: `import drinfeld_hecke`.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

use drinfeld_core::exactla::{is_separable, minimal_polynomial};
use drinfeld_core::hecke::{
    eigenform_check, hecke_matrix, hecke_matrix_mod_t, hecke_mod_t_on_power, required_input_precision, EigenVerdict,
    HeckeMatrix as CoreMatrix, ModTCache, ModTHeckeMatrix,
};
use drinfeld_core::modforms::{monomial_basis, type_rep, FormCache};
use drinfeld_core::scan::{scan_separability, ScanConfig, ScanReport as CoreReport};
use drinfeld_core::verify::{run_suite, VerifyOptions};
use drinfeld_core::{ring_a, Fq, FqElem, PolyRing, PrimePoly, RatField, Ring, TSeries};

fn err(e: drinfeld_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// The constant field F_q.
#[pyclass(name = "Field", frozen)]
struct PyField {
    fq: Fq,
}

impl PyField {
    fn prime(&self, s: &str) -> PyResult<PrimePoly> {
        PrimePoly::parse(&ring_a(&self.fq), s).map_err(err)
    }

    fn forms(&self, k: u64, m: u64, prime: &PrimePoly) -> PyResult<FormCache> {
        let q = self.fq.q() as u64;
        let Some(j_max) = monomial_basis(q, k, m).last().map(|b| b.j) else {
            return Err(PyValueError::new_err(format!("M_{{{k},{m}}} is zero for q = {q}")));
        };
        Ok(FormCache::new(&self.fq, required_input_precision(j_max, q, prime.degree()).max(j_max)))
    }
}

#[pymethods]
impl PyField {
    /// `Field(q)` or `Field(p=.., r=.., modulus=[c0, c1, ...])`.
    #[new]
    #[pyo3(signature = (q=None, *, p=None, r=None, modulus=None))]
    fn new(q: Option<u32>, p: Option<u32>, r: Option<u32>, modulus: Option<Vec<u32>>) -> PyResult<Self> {
        let fq = match (q, p) {
            (Some(q), None) if modulus.is_none() => Fq::from_order(q),
            (Some(q), None) => Fq::from_order(q).and_then(|f| Fq::new(f.p(), f.r(), modulus)),
            (None, Some(p)) => Fq::new(p, r.unwrap_or(1), modulus),
            (None, None) => Fq::from_order(2),
            (Some(_), Some(_)) => return Err(PyValueError::new_err("give q or p, not both")),
        };
        Ok(PyField { fq: fq.map_err(err)? })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.fq.q()
    }

    #[getter]
    fn p(&self) -> u32 {
        self.fq.p()
    }

    #[getter]
    fn r(&self) -> u32 {
        self.fq.r()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.fq.modulus().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Field(q={})", self.fq.q())
    }

    /// Coefficients of `g`, `h` or `E` through `t^prec`, as strings.
    #[pyo3(signature = (form, prec, mod_t=false))]
    fn expand(&self, form: &str, prec: usize, mod_t: bool) -> PyResult<Vec<String>> {
        let cache = FormCache::new(&self.fq, prec);
        let f = match form {
            "g" => cache.g(prec),
            "h" => cache.h(prec),
            "E" | "e" => cache.e(prec),
            _ => return Err(PyKeyError::new_err(format!("unknown form {form:?}"))),
        }
        .map_err(err)?;
        let a = cache.ring();
        Ok(if mod_t {
            let s: TSeries<FqElem> = f.num().map(|c| a.eval(c, &FqElem::ZERO));
            s.coeffs().iter().map(|c| self.fq.fmt_elem(c)).collect()
        } else {
            f.num().coeffs().iter().map(|c| a.fmt_elem(c)).collect()
        })
    }

    /// Matrix of `T_prime` on `M_{k,m}` over `F_q[T]`.
    #[pyo3(signature = (k, prime, m=0))]
    fn hecke_matrix(&self, k: u64, prime: &str, m: u64) -> PyResult<HeckeMatrix> {
        let p = self.prime(prime)?;
        let inner = hecke_matrix(&self.forms(k, m, &p)?, k, m, &p).map_err(err)?;
        Ok(HeckeMatrix { fq: self.fq.clone(), inner })
    }

    /// Reduction of `T_prime` modulo `T` on powers of `h~`.
    #[pyo3(signature = (k, prime, m=0))]
    fn hecke_matrix_mod_t(&self, k: u64, prime: &str, m: u64) -> PyResult<ModTMatrix> {
        let p = self.prime(prime)?;
        let cache = ModTCache::from_forms(&self.forms(k, m, &p)?);
        let inner = hecke_matrix_mod_t(&cache, k, m, &p).map_err(err)?;
        Ok(ModTMatrix { fq: self.fq.clone(), inner })
    }

    /// `(eigenvalue or None, [(j, coordinate of T_P h~^n on h~^j)])`.
    fn eigencheck(&self, n: usize, prime: &str) -> PyResult<(Option<String>, Vec<(usize, String)>)> {
        let p = self.prime(prime)?;
        let q = self.fq.q() as u64;
        let k = n as u64 * (q + 1);
        let m = type_rep(q, n as i64);
        let forms = self.forms(k, m, &p)?;
        let hm = hecke_matrix(&forms, k, m, &p).map_err(err)?;
        let field = RatField::new(&self.fq);
        let mut v = vec![field.zero(); hm.basis.len()];
        let idx = hm.basis.iter().position(|b| b.i == 0 && b.j == n).expect("h^n is a basis element");
        v[idx] = field.one();
        let eigenvalue = match eigenform_check(&field, &hm, &v).map_err(err)? {
            EigenVerdict::Eigenform { eigenvalue } => Some(field.fmt_elem(&eigenvalue)),
            EigenVerdict::NotEigenform { .. } => None,
        };
        let coords = if p.is_t() {
            Vec::new()
        } else {
            hecke_mod_t_on_power(&ModTCache::from_forms(&forms), n, &p)
                .map_err(err)?
                .into_iter()
                .map(|(j, c)| (j, self.fq.fmt_elem(&c)))
                .collect()
        };
        Ok((eigenvalue, coords))
    }

    #[pyo3(signature = (k_max=28, prime_deg_max=5, m=0, jobs=1))]
    fn scan_separability(&self, py: Python<'_>, k_max: u64, prime_deg_max: usize, m: u64, jobs: usize) -> PyResult<ScanReport> {
        let cfg = ScanConfig { k_max, prime_deg_max, m, jobs };
        let inner = py.detach(|| scan_separability(&self.fq, &cfg)).map_err(err)?;
        Ok(ScanReport { inner })
    }

    /// Runs a verification suite; returns `(suite, check, passed, detail)` tuples.
    #[pyo3(signature = (suite, prec=None))]
    fn verify(&self, suite: &str, prec: Option<usize>) -> PyResult<Vec<(String, String, bool, String)>> {
        let opts = VerifyOptions { prec, ..Default::default() };
        let reports = run_suite(suite, &self.fq, &opts).map_err(err)?;
        Ok(reports
            .into_iter()
            .flat_map(|r| {
                let suite = r.suite.clone();
                r.checks.into_iter().map(move |c| (suite.clone(), c.name, c.passed, c.detail))
            })
            .collect())
    }
}

#[pyclass(frozen)]
struct HeckeMatrix {
    fq: Fq,
    inner: CoreMatrix,
}

#[pymethods]
impl HeckeMatrix {
    #[getter]
    fn k(&self) -> u64 {
        self.inner.k
    }

    #[getter]
    fn m(&self) -> u64 {
        self.inner.m
    }

    /// Basis `g^i h^j` as `(i, j)` pairs.
    #[getter]
    fn basis(&self) -> Vec<(usize, usize)> {
        self.inner.basis.iter().map(|b| (b.i, b.j)).collect()
    }

    /// Rows of entries; column `c` is the image of basis element `c`.
    #[getter]
    fn entries(&self) -> Vec<Vec<String>> {
        let a = ring_a(&self.fq);
        self.inner.entries.rows().iter().map(|r| r.iter().map(|c| a.fmt_elem(c)).collect()).collect()
    }

    /// `(minimal polynomial, separable)` over `F_q(T)`.
    fn minimal_polynomial(&self) -> PyResult<(String, bool)> {
        let field = RatField::new(&self.fq);
        let mu = minimal_polynomial(&field, &self.inner.over_k(&field)).map_err(err)?;
        let px = PolyRing::new(field, "X");
        let sep = is_separable(&px, &mu).map_err(err)?;
        Ok((px.fmt_elem(&mu), sep))
    }

    fn __len__(&self) -> usize {
        self.inner.basis.len()
    }
}

#[pyclass(frozen)]
struct ModTMatrix {
    fq: Fq,
    inner: ModTHeckeMatrix,
}

#[pymethods]
impl ModTMatrix {
    #[getter]
    fn exponents(&self) -> Vec<usize> {
        self.inner.exponents.clone()
    }

    /// Rows of entries; row `r` is the image of `h~^exponents[r]`.
    #[getter]
    fn entries(&self) -> Vec<Vec<String>> {
        self.inner.entries.rows().iter().map(|r| r.iter().map(|c| self.fq.fmt_elem(c)).collect()).collect()
    }

    #[getter]
    fn diagonal(&self) -> String {
        self.fq.fmt_elem(&self.inner.diagonal)
    }
}

#[pyclass(frozen)]
struct ScanReport {
    inner: CoreReport,
}

#[pymethods]
impl ScanReport {
    /// Weights where every prime gave an inseparable minimal polynomial.
    #[getter]
    fn summary(&self) -> Vec<(u64, usize)> {
        self.inner.summary.iter().map(|s| (s.k, s.dim)).collect()
    }

    #[getter]
    fn failures(&self) -> usize {
        self.inner.failures()
    }

    fn to_csv(&self) -> PyResult<String> {
        self.inner.to_csv().map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __len__(&self) -> usize {
        self.inner.rows.len()
    }
}

#[pymodule]
fn drinfeld_hecke(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<HeckeMatrix>()?;
    m.add_class::<ModTMatrix>()?;
    m.add_class::<ScanReport>()?;
    Ok(())
}
