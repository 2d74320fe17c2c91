//! Representations of the voltage group: the permutation representation,
//! irreducible catalogs, their checks, and multiplicities via characters.

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{Coeff, Gaussian, Matrix, Rational};
use crate::covering::{GroupTable, Permutation};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RepError {
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("irreducible catalog is incomplete: {0}")]
    CatalogIncomplete(String),
    #[error("multiplicity of irrep {index} is not a nonnegative integer ({value})")]
    NonIntegerMultiplicity { index: usize, value: String },
    #[error("representation {name:?}: {message}")]
    Invalid { name: String, message: String },
    #[error("unknown builtin catalog {0:?}")]
    UnknownBuiltin(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldTag {
    Rational,
    Gaussian,
    Sampled,
}

impl FieldTag {
    pub fn name(self) -> &'static str {
        match self {
            FieldTag::Rational => "rational",
            FieldTag::Gaussian => "gaussian-rational",
            FieldTag::Sampled => "sampled-complex",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RepData {
    Rational(Vec<Matrix<Rational>>),
    Gaussian(Vec<Matrix<Gaussian>>),
    Sampled(Vec<Matrix<Complex64>>),
}

/// Matrices indexed like the elements of a [`GroupTable`].
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    pub name: String,
    degree: usize,
    data: RepData,
    characters: Option<Vec<Gaussian>>,
}

impl Representation {
    pub fn new(name: impl Into<String>, data: RepData) -> Self {
        let (degree, characters) = match &data {
            RepData::Rational(ms) => (
                ms.first().map_or(0, |m| m.rows()),
                Some(ms.iter().map(|m| m.trace().to_gaussian()).collect()),
            ),
            RepData::Gaussian(ms) => (ms.first().map_or(0, |m| m.rows()), Some(ms.iter().map(|m| m.trace()).collect())),
            RepData::Sampled(ms) => (ms.first().map_or(0, |m| m.rows()), None),
        };
        Representation { name: name.into(), degree, data, characters }
    }

    /// Attaches exact character values to a sampled representation.
    pub fn with_characters(mut self, characters: Vec<Gaussian>) -> Self {
        self.characters = Some(characters);
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        match &self.data {
            RepData::Rational(m) => m.len(),
            RepData::Gaussian(m) => m.len(),
            RepData::Sampled(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn field(&self) -> FieldTag {
        match &self.data {
            RepData::Rational(_) => FieldTag::Rational,
            RepData::Gaussian(_) => FieldTag::Gaussian,
            RepData::Sampled(_) => FieldTag::Sampled,
        }
    }

    pub fn data(&self) -> &RepData {
        &self.data
    }

    /// The matrices over `C`, when they are exact and representable there.
    pub fn exact_matrices<C: Coeff>(&self) -> Option<Vec<Matrix<C>>> {
        let conv = |m: &Matrix<Gaussian>| -> Option<Matrix<C>> {
            let data = m.data().iter().map(C::from_gaussian).collect::<Option<Vec<C>>>()?;
            Some(Matrix::from_vec(m.rows(), m.cols(), data))
        };
        match &self.data {
            RepData::Rational(ms) => ms.iter().map(|m| conv(&m.map(|x| x.to_gaussian()))).collect(),
            RepData::Gaussian(ms) => ms.iter().map(conv).collect(),
            RepData::Sampled(_) => None,
        }
    }

    pub fn numeric_matrices(&self) -> Vec<Matrix<Complex64>> {
        match &self.data {
            RepData::Rational(ms) => ms.iter().map(|m| m.map(|x| x.to_c64())).collect(),
            RepData::Gaussian(ms) => ms.iter().map(|m| m.map(|x| x.to_c64())).collect(),
            RepData::Sampled(ms) => ms.clone(),
        }
    }

    pub fn exact_character(&self, g: usize) -> Option<Gaussian> {
        self.characters.as_ref().map(|c| c[g].clone())
    }

    pub fn numeric_character(&self, g: usize) -> Complex64 {
        match &self.characters {
            Some(c) => c[g].to_c64(),
            None => self.numeric_matrices()[g].trace(),
        }
    }

    pub fn has_exact_characters(&self) -> bool {
        self.characters.is_some()
    }
}

pub fn permutation_representation(group: &GroupTable) -> Representation {
    let ms = group.elements().iter().map(|g| g.matrix().to_field::<Rational>()).collect();
    Representation::new("permutation", RepData::Rational(ms))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogSource {
    Builtin(String),
    File,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrrepCatalog {
    pub irreps: Vec<Representation>,
    pub source: CatalogSource,
}

impl IrrepCatalog {
    pub fn degrees(&self) -> Vec<usize> {
        self.irreps.iter().map(|r| r.degree()).collect()
    }
}

fn max_abs_c64(m: &Matrix<Complex64>) -> f64 {
    m.data().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_abs_exact<C: Coeff>(m: &Matrix<C>) -> f64 {
    let x = m.data().iter().map(|z| z.to_c64().norm()).fold(0.0, f64::max);
    if x == 0.0 && !m.is_zero_matrix() {
        f64::MIN_POSITIVE
    } else {
        x
    }
}

/// Residuals of one representation; zero means the property holds exactly
/// for exact fields.
#[derive(Clone, Debug, PartialEq)]
pub struct RepDiagnostics {
    pub name: String,
    pub field: FieldTag,
    pub degree: usize,
    pub length_ok: bool,
    pub identity_residual: f64,
    pub homomorphism_residual: f64,
    pub unitarity_residual: f64,
}

impl RepDiagnostics {
    pub fn tolerance(&self) -> f64 {
        if self.field == FieldTag::Sampled {
            1e-10
        } else {
            0.0
        }
    }

    pub fn is_homomorphism(&self) -> bool {
        self.length_ok && self.identity_residual <= self.tolerance() && self.homomorphism_residual <= self.tolerance()
    }

    pub fn is_unitary(&self) -> bool {
        self.length_ok && self.unitarity_residual <= self.tolerance()
    }
}

fn exact_residuals<C: Coeff>(ms: &[Matrix<C>], group: &GroupTable) -> (f64, f64, f64) {
    let l = ms[0].rows();
    let id = Matrix::<C>::identity(l);
    let ident = max_abs_exact(&(&ms[0] - &id));
    let mut hom: f64 = 0.0;
    for a in 0..group.order() {
        for b in 0..group.order() {
            let d = &(&ms[a] * &ms[b]) - &ms[group.mul(a, b)];
            hom = hom.max(max_abs_exact(&d));
        }
    }
    let unit = ms.iter().map(|m| max_abs_exact(&(&(&m.adjoint() * m) - &id))).fold(0.0, f64::max);
    (ident, hom, unit)
}

fn numeric_residuals(ms: &[Matrix<Complex64>], group: &GroupTable) -> (f64, f64, f64) {
    let l = ms[0].rows();
    let id = Matrix::<Complex64>::identity(l);
    let ident = max_abs_c64(&(&ms[0] - &id));
    let mut hom: f64 = 0.0;
    for a in 0..group.order() {
        for b in 0..group.order() {
            hom = hom.max(max_abs_c64(&(&(&ms[a] * &ms[b]) - &ms[group.mul(a, b)])));
        }
    }
    let adj = |m: &Matrix<Complex64>| Matrix::from_fn(m.cols(), m.rows(), |i, j| m[(j, i)].conj());
    let unit = ms.iter().map(|m| max_abs_c64(&(&(&adj(m) * m) - &id))).fold(0.0, f64::max);
    (ident, hom, unit)
}

pub fn check_representation(rep: &Representation, group: &GroupTable) -> RepDiagnostics {
    let length_ok = rep.len() == group.order()
        && rep.degree() > 0
        && match rep.data() {
            RepData::Rational(ms) => ms.iter().all(|m| m.rows() == rep.degree() && m.is_square()),
            RepData::Gaussian(ms) => ms.iter().all(|m| m.rows() == rep.degree() && m.is_square()),
            RepData::Sampled(ms) => ms.iter().all(|m| m.rows() == rep.degree() && m.is_square()),
        };
    let (identity_residual, homomorphism_residual, unitarity_residual) = if !length_ok {
        (f64::INFINITY, f64::INFINITY, f64::INFINITY)
    } else {
        match rep.data() {
            RepData::Rational(ms) => exact_residuals(ms, group),
            RepData::Gaussian(ms) => exact_residuals(ms, group),
            RepData::Sampled(ms) => numeric_residuals(ms, group),
        }
    };
    RepDiagnostics {
        name: rep.name.clone(),
        field: rep.field(),
        degree: rep.degree(),
        length_ok,
        identity_residual,
        homomorphism_residual,
        unitarity_residual,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogDiagnostics {
    pub irreps: Vec<RepDiagnostics>,
    pub first_is_trivial: bool,
    pub degree_square_sum: usize,
    pub group_order: usize,
    /// Largest deviation of the character Gram matrix from the identity.
    pub orthonormality_residual: f64,
    pub exact_characters: bool,
}

impl CatalogDiagnostics {
    pub fn orthonormality_tolerance(&self) -> f64 {
        if self.exact_characters {
            0.0
        } else {
            1e-10
        }
    }

    pub fn complete(&self) -> bool {
        self.first_is_trivial
            && self.degree_square_sum == self.group_order
            && self.orthonormality_residual <= self.orthonormality_tolerance()
    }

    pub fn passes(&self) -> bool {
        self.complete() && self.irreps.iter().all(|r| r.is_homomorphism())
    }
}

/// `(1/|Γ|) Σ_g χ(g) conj(ψ(g))` with exact characters.
fn inner_exact(a: &[Gaussian], b: &[Gaussian]) -> Gaussian {
    let sum = a.iter().zip(b).fold(Gaussian::zero(), |acc, (x, y)| acc + x.clone() * y.conj());
    sum / Gaussian::from_int(a.len() as i64)
}

fn inner_numeric(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<Complex64>() / a.len() as f64
}

pub fn check_catalog(catalog: &IrrepCatalog, group: &GroupTable) -> CatalogDiagnostics {
    let irreps: Vec<RepDiagnostics> = catalog.irreps.iter().map(|r| check_representation(r, group)).collect();
    let first_is_trivial = catalog.irreps.first().is_some_and(|r| {
        r.degree() == 1 && r.len() == group.order() && r.numeric_matrices().iter().all(|m| (m[(0, 0)] - 1.0).norm() < 1e-12)
    });
    let degree_square_sum = catalog.irreps.iter().map(|r| r.degree() * r.degree()).sum();
    let usable = irreps.iter().all(|d| d.length_ok);
    let exact_characters = catalog.irreps.iter().all(|r| r.has_exact_characters());
    let mut orthonormality_residual: f64 = if usable { 0.0 } else { f64::INFINITY };
    if usable {
        let n = catalog.irreps.len();
        if exact_characters {
            let chars: Vec<Vec<Gaussian>> = catalog
                .irreps
                .iter()
                .map(|r| (0..group.order()).map(|g| r.exact_character(g).unwrap()).collect())
                .collect();
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { Gaussian::one() } else { Gaussian::zero() };
                    let d = inner_exact(&chars[i], &chars[j]) - want;
                    orthonormality_residual = orthonormality_residual.max(d.to_c64().norm());
                }
            }
        } else {
            let chars: Vec<Vec<Complex64>> = catalog
                .irreps
                .iter()
                .map(|r| (0..group.order()).map(|g| r.numeric_character(g)).collect())
                .collect();
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    let d = inner_numeric(&chars[i], &chars[j]) - want;
                    orthonormality_residual = orthonormality_residual.max(d.norm());
                }
            }
        }
    }
    CatalogDiagnostics {
        irreps,
        first_is_trivial,
        degree_square_sum,
        group_order: group.order(),
        orthonormality_residual,
        exact_characters,
    }
}

/// `m_i = (1/|Γ|) Σ_g tr ℙ(g) conj(χ_i(g))`.
pub fn multiplicities(catalog: &IrrepCatalog, permrep: &Representation, group: &GroupTable) -> Result<Vec<usize>, RepError> {
    let diag = check_catalog(catalog, group);
    if !diag.complete() {
        return Err(RepError::CatalogIncomplete(format!(
            "trivial first: {}, sum of squared degrees {} vs group order {}, orthonormality residual {:e}",
            diag.first_is_trivial, diag.degree_square_sum, diag.group_order, diag.orthonormality_residual
        )));
    }
    let perm_chars: Vec<Gaussian> = (0..group.order())
        .map(|g| permrep.exact_character(g).expect("permutation characters are exact"))
        .collect();
    let mut out = Vec::with_capacity(catalog.irreps.len());
    for (index, rep) in catalog.irreps.iter().enumerate() {
        if rep.has_exact_characters() {
            let chi: Vec<Gaussian> = (0..group.order()).map(|g| rep.exact_character(g).unwrap()).collect();
            let m = inner_exact(&perm_chars, &chi);
            let ok = m.im.is_zero() && m.re.is_integer() && !m.re.is_negative();
            if !ok {
                return Err(RepError::NonIntegerMultiplicity { index, value: format!("{}+{}i", m.re, m.im) });
            }
            out.push(m.re.to_integer().to_usize().unwrap());
        } else {
            let p: Vec<Complex64> = perm_chars.iter().map(|c| c.to_c64()).collect();
            let chi: Vec<Complex64> = (0..group.order()).map(|g| rep.numeric_character(g)).collect();
            let m = inner_numeric(&p, &chi);
            let rounded = m.re.round();
            if (m - Complex64::new(rounded, 0.0)).norm() >= 1e-6 || rounded < 0.0 {
                return Err(RepError::NonIntegerMultiplicity { index, value: format!("{m}") });
            }
            out.push(rounded as usize);
        }
    }
    Ok(out)
}

fn element_orders(group: &GroupTable) -> Vec<usize> {
    let mut v: Vec<usize> = group.elements().iter().map(Permutation::order).collect();
    v.sort_unstable();
    v
}

fn power_index(group: &GroupTable, g: usize, e: usize) -> usize {
    (0..e).fold(0, |acc, _| group.mul(acc, g))
}

/// Catalog for `"S2"`, `"S3"` or `"cyclic-n"`, after checking that the
/// group has the right order and element orders.
pub fn builtin_irreps(kind: &str, group: &GroupTable) -> Result<IrrepCatalog, RepError> {
    let irreps = match kind {
        "S2" => builtin_cyclic(2, group)?,
        "S3" => builtin_s3(group)?,
        _ => {
            let n: usize = kind
                .strip_prefix("cyclic-")
                .and_then(|n| n.parse().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| RepError::UnknownBuiltin(kind.to_string()))?;
            builtin_cyclic(n, group)?
        }
    };
    Ok(IrrepCatalog { irreps, source: CatalogSource::Builtin(kind.to_string()) })
}

/// Chooses a builtin catalog from the group structure, if one matches.
pub fn detect_builtin(group: &GroupTable) -> Option<&'static str> {
    let n = group.order();
    let orders = element_orders(group);
    if n == 6 && orders == [1, 2, 2, 2, 3, 3] {
        return Some("S3");
    }
    if n == 2 {
        return Some("S2");
    }
    if orders.last() == Some(&n) {
        return Some(match n {
            1 => "cyclic-1",
            3 => "cyclic-3",
            4 => "cyclic-4",
            5 => "cyclic-5",
            6 => "cyclic-6",
            7 => "cyclic-7",
            8 => "cyclic-8",
            _ => return None,
        });
    }
    None
}

fn builtin_cyclic(n: usize, group: &GroupTable) -> Result<Vec<Representation>, RepError> {
    if group.order() != n {
        return Err(RepError::GroupMismatch(format!("group has order {}, expected cyclic of order {n}", group.order())));
    }
    let gen = (0..n)
        .find(|&g| group.element(g).order() == n)
        .ok_or_else(|| RepError::GroupMismatch(format!("group of order {n} is not cyclic")))?;
    // exponent a with element = gen^a
    let mut exponent = vec![0usize; n];
    for a in 0..n {
        exponent[power_index(group, gen, a)] = a;
    }
    let names: Vec<String> = (0..n)
        .map(|j| match (n, j) {
            (_, 0) => "trivial".to_string(),
            (2, 1) => "sign".to_string(),
            _ => format!("chi{j}"),
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let rep = match n {
            1 | 2 => {
                let ms = exponent
                    .iter()
                    .map(|&a| Matrix::from_vec(1, 1, vec![Rational::from_int(if (j * a) % 2 == 1 { -1 } else { 1 })]))
                    .collect();
                Representation::new(names[j].clone(), RepData::Rational(ms))
            }
            4 => {
                const POWERS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
                let ms = exponent
                    .iter()
                    .map(|&a| {
                        let (re, im) = POWERS[(j * a) % 4];
                        Matrix::from_vec(1, 1, vec![crate::algebra::gaussian(re, im)])
                    })
                    .collect();
                Representation::new(names[j].clone(), RepData::Gaussian(ms))
            }
            _ => {
                let ms = exponent
                    .iter()
                    .map(|&a| {
                        let theta = 2.0 * std::f64::consts::PI * ((j * a) % n) as f64 / n as f64;
                        Matrix::from_vec(1, 1, vec![Complex64::from_polar(1.0, theta)])
                    })
                    .collect();
                Representation::new(names[j].clone(), RepData::Sampled(ms))
            }
        };
        out.push(rep);
    }
    Ok(out)
}

fn builtin_s3(group: &GroupTable) -> Result<Vec<Representation>, RepError> {
    if group.order() != 6 || element_orders(group) != [1, 2, 2, 2, 3, 3] {
        return Err(RepError::GroupMismatch("group is not isomorphic to S3".into()));
    }
    let a = (0..6).find(|&g| group.element(g).order() == 3).unwrap();
    let b = (0..6).find(|&g| group.element(g).order() == 2).unwrap();
    // every element is a^i b^j
    let mut word = [(0usize, 0usize); 6];
    for i in 0..3 {
        for j in 0..2 {
            word[group.mul(power_index(group, a, i), power_index(group, b, j))] = (i, j);
        }
    }
    let q = Rational::from_int;
    let ra = Matrix::from_vec(2, 2, vec![q(0), q(-1), q(1), q(-1)]);
    let rb = Matrix::from_vec(2, 2, vec![q(0), q(1), q(1), q(0)]);
    let (c, s) = (-0.5, 3f64.sqrt() / 2.0);
    let z = |x: f64| Complex64::new(x, 0.0);
    let oa = Matrix::from_vec(2, 2, vec![z(c), z(-s), z(s), z(c)]);
    let ob = Matrix::from_vec(2, 2, vec![z(1.0), z(0.0), z(0.0), z(-1.0)]);
    fn pow<T: Clone + Zero + One + std::ops::Add<Output = T> + std::ops::Mul<Output = T>>(m: &Matrix<T>, e: usize) -> Matrix<T> {
        (0..e).fold(Matrix::identity(m.rows()), |acc, _| &acc * m)
    }
    let trivial = (0..6).map(|_| Matrix::from_vec(1, 1, vec![q(1)])).collect();
    let sign = word.iter().map(|&(_, j)| Matrix::from_vec(1, 1, vec![q(if j == 1 { -1 } else { 1 })])).collect();
    let rational: Vec<Matrix<Rational>> = word.iter().map(|&(i, j)| &pow(&ra, i) * &pow(&rb, j)).collect();
    let characters: Vec<Gaussian> = rational.iter().map(|m| m.trace().to_gaussian()).collect();
    let orthogonal = word.iter().map(|&(i, j)| &pow(&oa, i) * &pow(&ob, j)).collect();
    Ok(vec![
        Representation::new("trivial", RepData::Rational(trivial)),
        Representation::new("sign", RepData::Rational(sign)),
        Representation::new("standard", RepData::Sampled(orthogonal)).with_characters(characters),
    ])
}

/// The integral form of the two-dimensional irrep of `S3`, in the group's
/// element order. Not unitary; same characters as the catalog entry.
pub fn s3_rational_standard(group: &GroupTable) -> Result<Representation, RepError> {
    builtin_s3(group)?;
    let a = (0..6).find(|&g| group.element(g).order() == 3).unwrap();
    let b = (0..6).find(|&g| group.element(g).order() == 2).unwrap();
    let q = Rational::from_int;
    let ra = Matrix::from_vec(2, 2, vec![q(0), q(-1), q(1), q(-1)]);
    let rb = Matrix::from_vec(2, 2, vec![q(0), q(1), q(1), q(0)]);
    let mut ms = vec![Matrix::<Rational>::identity(2); 6];
    for i in 0..3 {
        for j in 0..2 {
            let g = group.mul(power_index(group, a, i), power_index(group, b, j));
            let mut m = Matrix::identity(2);
            for _ in 0..i {
                m = &m * &ra;
            }
            for _ in 0..j {
                m = &m * &rb;
            }
            ms[g] = m;
        }
    }
    Ok(Representation::new("standard-integral", RepData::Rational(ms)))
}

pub fn residual_text(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:e}")
    }
}
