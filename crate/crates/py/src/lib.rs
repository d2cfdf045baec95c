//! Python bindings for the cavity-entanglement core: the domain types, the
//! coefficient/density-matrix pipeline, the entanglement measures and the
//! verification entry points.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cavity_entanglement as core;
use core::density::PropagatorMomenta;
use core::electron::Sign;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn sign(v: i64) -> PyResult<Sign> {
    Sign::from_int(v).map_err(err)
}

#[pyclass(name = "Material", from_py_object)]
#[derive(Clone)]
struct PyMaterial {
    inner: core::Material,
}

#[pymethods]
impl PyMaterial {
    #[new]
    fn new(name: String, fermi_velocity: f64, soi_strength: f64) -> PyResult<Self> {
        Ok(Self {
            inner: core::Material::new(name, fermi_velocity, soi_strength).map_err(err)?,
        })
    }

    /// Built-in preset by name (graphene, silicene, germanene, stanene).
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        core::material::preset(name)
            .map(|inner| Self { inner })
            .ok_or_else(|| PyValueError::new_err(format!("unknown preset `{name}`")))
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn fermi_velocity(&self) -> f64 {
        self.inner.fermi_velocity
    }

    #[getter]
    fn soi_strength(&self) -> f64 {
        self.inner.soi_strength
    }

    fn __repr__(&self) -> String {
        format!(
            "Material(name='{}', fermi_velocity={}, soi_strength={})",
            self.inner.name, self.inner.fermi_velocity, self.inner.soi_strength
        )
    }
}

#[pyclass(name = "ElectronState", from_py_object)]
#[derive(Clone)]
struct PyElectronState {
    inner: core::ElectronState,
}

#[pymethods]
impl PyElectronState {
    #[new]
    #[pyo3(signature = (energy, angle, spin=1, valley=1, band=1))]
    fn new(energy: f64, angle: f64, spin: i64, valley: i64, band: i64) -> PyResult<Self> {
        Ok(Self {
            inner: core::ElectronState::new(energy, angle, sign(spin)?, sign(valley)?, sign(band)?)
                .map_err(err)?,
        })
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy
    }

    #[getter]
    fn angle(&self) -> f64 {
        self.inner.angle
    }
}

#[pyclass(name = "CavityGeometry", from_py_object)]
#[derive(Clone)]
struct PyCavityGeometry {
    inner: core::CavityGeometry,
}

#[pymethods]
impl PyCavityGeometry {
    /// Omitted light_speed defaults to the vacuum value; omitted mode_volume
    /// to the default transverse area times the length.
    #[new]
    #[pyo3(signature = (length, z1, z2, n_max, light_speed=None, mode_volume=None))]
    fn new(
        length: f64,
        z1: f64,
        z2: f64,
        n_max: u32,
        light_speed: Option<f64>,
        mode_volume: Option<f64>,
    ) -> PyResult<Self> {
        let light_speed = light_speed.unwrap_or(core::constants::SPEED_OF_LIGHT);
        let mode_volume = mode_volume.unwrap_or(core::constants::DEFAULT_TRANSVERSE_AREA * length);
        Ok(Self {
            inner: core::CavityGeometry::new(length, z1, z2, n_max, light_speed, mode_volume)
                .map_err(err)?,
        })
    }

    fn photon_propagator(&self, zi: f64, zj: f64, q: f64) -> PyResult<f64> {
        self.inner.photon_propagator(zi, zj, q).map_err(err)
    }

    fn time_of_flight(&self) -> PyResult<f64> {
        self.inner.time_of_flight().map_err(err)
    }

    #[getter]
    fn mode_volume(&self) -> f64 {
        self.inner.mode_volume
    }
}

#[pyclass(name = "LayerConfig", from_py_object)]
#[derive(Clone)]
struct PyLayerConfig {
    inner: core::LayerConfig,
}

#[pymethods]
impl PyLayerConfig {
    #[new]
    fn new(material: PyMaterial, electron: PyElectronState, position: f64) -> Self {
        Self {
            inner: core::LayerConfig::new(material.inner, electron.inner, position),
        }
    }
}

#[pyclass(name = "RhoCoefficients", from_py_object)]
#[derive(Clone)]
struct PyRhoCoefficients {
    inner: core::RhoCoefficients,
}

#[pymethods]
impl PyRhoCoefficients {
    #[getter]
    fn l1(&self) -> f64 {
        self.inner.l1
    }

    #[getter]
    fn l2(&self) -> f64 {
        self.inner.l2
    }

    #[getter]
    fn b1(&self) -> f64 {
        self.inner.b1
    }

    #[getter]
    fn b2(&self) -> f64 {
        self.inner.b2
    }

    #[getter]
    fn n(&self) -> Complex64 {
        self.inner.n_coef
    }

    #[getter]
    fn m(&self) -> Complex64 {
        self.inner.m_coef
    }

    #[getter]
    fn zeta(&self) -> f64 {
        self.inner.zeta
    }

    fn __repr__(&self) -> String {
        format!(
            "RhoCoefficients(l1={:.6e}, l2={:.6e}, b1={:.6e}, b2={:.6e}, |n|={:.6e}, |m|={:.6e})",
            self.inner.l1,
            self.inner.l2,
            self.inner.b1,
            self.inner.b2,
            self.inner.n_coef.norm(),
            self.inner.m_coef.norm()
        )
    }
}

fn matrix_to_py(m: &nalgebra::DMatrix<Complex64>) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn matrix_from_py(rows: Vec<Vec<Complex64>>) -> PyResult<nalgebra::DMatrix<Complex64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(nalgebra::DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

#[pyfunction]
fn band_energies(epsilon: f64, delta: f64) -> PyResult<(f64, f64)> {
    core::band_energies(epsilon, delta).map_err(err)
}

#[pyfunction]
fn chi_pair(epsilon: f64, delta: f64) -> PyResult<(f64, f64, f64)> {
    let chi = core::ChiPair::new(epsilon, delta).map_err(err)?;
    Ok((chi.chi_plus, chi.chi_minus, chi.delta_chi))
}

#[pyfunction]
#[pyo3(signature = (layer1, layer2, cavity, q=0.0, normalized=false))]
fn compute_coefficients(
    layer1: PyLayerConfig,
    layer2: PyLayerConfig,
    cavity: PyCavityGeometry,
    q: f64,
    normalized: bool,
) -> PyResult<PyRhoCoefficients> {
    let momenta = PropagatorMomenta::uniform(q);
    let inner = if normalized {
        core::compute_coefficients_normalized(&layer1.inner, &layer2.inner, &cavity.inner, &momenta)
    } else {
        core::compute_coefficients_momenta(
            &layer1.inner,
            &layer2.inner,
            &cavity.inner,
            &momenta,
            &Default::default(),
        )
    }
    .map_err(err)?;
    Ok(PyRhoCoefficients { inner })
}

/// The 4x4 density matrix at time t as nested lists of complex numbers,
/// basis (|+,+>, |+,->, |-,+>, |-,->) with layer 1 first.
#[pyfunction]
fn rho_total(coeffs: PyRhoCoefficients, t: f64) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(matrix_to_py(
        core::rho_total(&coeffs.inner, t).map_err(err)?.entries(),
    ))
}

/// Brute-force second-order state from the operator algebra (the oracle for
/// `rho_total`).
#[pyfunction]
#[pyo3(signature = (layer1, layer2, cavity, t, q=0.0, normalized=false))]
fn dyson_rho(
    layer1: PyLayerConfig,
    layer2: PyLayerConfig,
    cavity: PyCavityGeometry,
    t: f64,
    q: f64,
    normalized: bool,
) -> PyResult<Vec<Vec<Complex64>>> {
    let momenta = PropagatorMomenta::uniform(q);
    let rho = if normalized {
        core::oracle::dyson_rho_normalized(&layer1.inner, &layer2.inner, &cavity.inner, &momenta, t)
    } else {
        core::dyson_rho(&layer1.inner, &layer2.inner, &cavity.inner, t, q)
    }
    .map_err(err)?;
    Ok(matrix_to_py(rho.entries()))
}

/// Purity Tr(rho^2) of a density matrix given as nested lists.
#[pyfunction]
fn purity(rho: Vec<Vec<Complex64>>) -> PyResult<f64> {
    let m = matrix_from_py(rho)?;
    let dm = core::DensityMatrix::new(m).map_err(err)?;
    Ok(core::purity(&dm))
}

/// Entropy report for the reduced state of `layer` (1 or 2):
/// (exact, expansion_leading, expansion_with_coherence, rate, (p_minus, p_plus)).
#[pyfunction]
#[pyo3(signature = (coeffs, t, layer=2))]
fn entropy_report(
    coeffs: PyRhoCoefficients,
    t: f64,
    layer: u8,
) -> PyResult<(f64, f64, f64, f64, (f64, f64))> {
    let r = core::entropy_report(&coeffs.inner, t, layer).map_err(err)?;
    Ok((
        r.exact,
        r.expansion_leading,
        r.expansion_with_coherence,
        r.rate,
        r.eigenvalues,
    ))
}

/// Wootters concurrence of a 4x4 density matrix given as nested lists.
#[pyfunction]
fn wootters_concurrence(rho: Vec<Vec<Complex64>>) -> PyResult<f64> {
    let m = matrix_from_py(rho)?;
    core::concurrence::wootters_concurrence_raw(&m).map_err(err)
}

/// Closed form, numeric oracle and spin-flip square roots:
/// (closed_form, oracle, [sqrts], blocked_reason_or_None).
#[pyfunction]
#[pyo3(signature = (layer1, layer2, cavity, t, q=0.0, normalized=false))]
fn concurrence_report(
    layer1: PyLayerConfig,
    layer2: PyLayerConfig,
    cavity: PyCavityGeometry,
    t: f64,
    q: f64,
    normalized: bool,
) -> PyResult<(f64, f64, [f64; 4], Option<String>)> {
    let r = core::concurrence::concurrence_report_with(
        &layer1.inner,
        &layer2.inner,
        &cavity.inner,
        t,
        &PropagatorMomenta::uniform(q),
        &Default::default(),
        normalized,
    )
    .map_err(err)?;
    Ok((
        r.closed_form,
        r.oracle,
        r.spin_flip_eigen_sqrts,
        r.selection_blocked,
    ))
}

/// Identical-layer concurrence closed form.
#[pyfunction]
fn concurrence_identical(
    epsilon: f64,
    lambda_so: f64,
    dphi: f64,
    zeta_t2_delta12: f64,
) -> PyResult<f64> {
    core::concurrence_identical(epsilon, lambda_so, dphi, zeta_t2_delta12).map_err(err)
}

/// Names of the built-in figure recipes.
#[pyfunction]
fn recipe_names() -> Vec<String> {
    core::recipe_names().iter().map(|s| s.to_string()).collect()
}

/// CSV dataset of a built-in figure recipe.
#[pyfunction]
fn sweep_csv(recipe: &str) -> PyResult<String> {
    let spec = core::figure_recipe(recipe).map_err(err)?;
    let rows = core::run_sweep(&spec).map_err(err)?;
    Ok(core::render_csv(spec.variable, &rows))
}

/// Run the verification suites; returns the JSON report. Raises if a hard
/// check fails.
#[pyfunction]
#[pyo3(signature = (seed=42, cases=200))]
fn run_verification(seed: u64, cases: usize) -> PyResult<String> {
    let report = core::run_verification(seed, cases);
    if !report.passed {
        return Err(PyValueError::new_err(format!(
            "verification failed:\n{}",
            report.to_json()
        )));
    }
    Ok(report.to_json())
}

#[pymodule]
fn cavent_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMaterial>()?;
    m.add_class::<PyElectronState>()?;
    m.add_class::<PyCavityGeometry>()?;
    m.add_class::<PyLayerConfig>()?;
    m.add_class::<PyRhoCoefficients>()?;
    m.add_function(wrap_pyfunction!(band_energies, m)?)?;
    m.add_function(wrap_pyfunction!(chi_pair, m)?)?;
    m.add_function(wrap_pyfunction!(compute_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(rho_total, m)?)?;
    m.add_function(wrap_pyfunction!(dyson_rho, m)?)?;
    m.add_function(wrap_pyfunction!(purity, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_report, m)?)?;
    m.add_function(wrap_pyfunction!(wootters_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence_report, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence_identical, m)?)?;
    m.add_function(wrap_pyfunction!(recipe_names, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    m.add_function(wrap_pyfunction!(run_verification, m)?)?;
    m.add("SPEED_OF_LIGHT", core::constants::SPEED_OF_LIGHT)?;
    m.add(
        "DEFAULT_TRANSVERSE_AREA",
        core::constants::DEFAULT_TRANSVERSE_AREA,
    )?;
    m.add("REFERENCE_TIME_WINDOW", core::sweep::REFERENCE_TIME_WINDOW)?;
    Ok(())
}
