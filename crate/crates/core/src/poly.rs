//! Sparse multigraded polynomial arithmetic over ℚ.
//!
//! Variables are {X₀,Y₀,Z₀} (degree-1 coordinates on the space of binary
//! quadratic forms, housing symmetric powers of the dual adjoint
//! representation) together with one coordinate pair (xᵢ,yᵢ) per projective
//! line, with an extra pair (x₀,y₀) for the binary-form slot. The module
//! carries the infinitesimal sl₂ action, the Plücker minors, the canonical
//! sections sᵢ, and the equivariant splitting of symmetric powers along the
//! invariant conic X₀Z₀ − Y₀².

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::{One, Signed, Zero};

use crate::linalg::{Rational, SparseMatrix, Vector};
use crate::{Error, Result};

/// A variable, ordered X₀ < Y₀ < Z₀ < x₀ < y₀ < x₁ < y₁ < ⋯
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u16);

impl Var {
    pub const SYM_X: Var = Var(0);
    pub const SYM_Y: Var = Var(1);
    pub const SYM_Z: Var = Var(2);

    /// The coordinate xᵢ; index 0 is the binary-form slot.
    pub fn x(i: usize) -> Var {
        Var(3 + 2 * i as u16)
    }

    /// The coordinate yᵢ; index 0 is the binary-form slot.
    pub fn y(i: usize) -> Var {
        Var(4 + 2 * i as u16)
    }

    pub fn is_sym(self) -> bool {
        self.0 < 3
    }

    /// Slot index for coordinate pairs, `None` for X₀,Y₀,Z₀.
    pub fn slot(self) -> Option<usize> {
        if self.is_sym() {
            None
        } else {
            Some(((self.0 - 3) / 2) as usize)
        }
    }

    /// Weight under the torus generator h.
    pub fn weight(self) -> i64 {
        match self.0 {
            0 => 2,  // X₀
            1 => 0,  // Y₀
            2 => -2, // Z₀
            k if k % 2 == 1 => 1,
            _ => -1,
        }
    }

    pub fn name(self) -> String {
        match self.0 {
            0 => "X0".into(),
            1 => "Y0".into(),
            2 => "Z0".into(),
            k if k % 2 == 1 => format!("x{}", (k - 3) / 2),
            k => format!("y{}", (k - 4) / 2),
        }
    }

    pub fn parse(s: &str) -> Result<Var> {
        let err = || Error::Parse(format!("bad variable `{s}`"));
        match s {
            "X0" => return Ok(Var::SYM_X),
            "Y0" => return Ok(Var::SYM_Y),
            "Z0" => return Ok(Var::SYM_Z),
            _ => {}
        }
        let (head, idx) = s.split_at(1);
        let i: usize = idx.parse().map_err(|_| err())?;
        match head {
            "x" => Ok(Var::x(i)),
            "y" => Ok(Var::y(i)),
            _ => Err(err()),
        }
    }
}

/// A monomial: sorted exponent list with no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u16)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    pub fn from_exponents<I: IntoIterator<Item = (Var, u16)>>(iter: I) -> Monomial {
        let mut list: Vec<(Var, u16)> = iter.into_iter().filter(|&(_, e)| e > 0).collect();
        list.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(Var, u16)> = Vec::with_capacity(list.len());
        for (v, e) in list {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn exponent(&self, v: Var) -> u16 {
        match self.0.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(pos) => self.0[pos].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u16)> + '_ {
        self.0.iter().copied()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_exponents(self.iter().chain(other.iter()))
    }

    /// Weight under h, summed over all slots.
    pub fn weight(&self) -> i64 {
        self.0
            .iter()
            .map(|&(v, e)| v.weight() * e as i64)
            .sum()
    }

    /// Degree in {X₀,Y₀,Z₀}.
    pub fn sym_degree(&self) -> usize {
        self.0
            .iter()
            .filter(|(v, _)| v.is_sym())
            .map(|&(_, e)| e as usize)
            .sum()
    }

    /// Degree in the coordinate pair of `slot`.
    pub fn slot_degree(&self, slot: usize) -> usize {
        self.exponent(Var::x(slot)) as usize + self.exponent(Var::y(slot)) as usize
    }

    /// Largest slot index appearing, if any.
    pub fn max_slot(&self) -> Option<usize> {
        self.0.iter().filter_map(|&(v, _)| v.slot()).max()
    }

    /// The monomial with the {X₀,Y₀,Z₀} and (x₀,y₀) parts removed.
    pub fn factor_part(&self) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter(|(v, _)| !v.is_sym() && v.slot() != Some(0))
                .copied()
                .collect(),
        )
    }

    /// The {X₀,Y₀,Z₀} exponents (a, b, c).
    pub fn sym_exponents(&self) -> (u16, u16, u16) {
        (
            self.exponent(Var::SYM_X),
            self.exponent(Var::SYM_Y),
            self.exponent(Var::SYM_Z),
        )
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded-lexicographic: total degree first, then earlier variables with
/// larger exponents win.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let mut i = 0;
            let mut j = 0;
            loop {
                match (self.0.get(i), other.0.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(va, ea)), Some(&(vb, eb))) => {
                        if va < vb {
                            return Ordering::Greater;
                        }
                        if vb < va {
                            return Ordering::Less;
                        }
                        match ea.cmp(&eb) {
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                            ord => return ord,
                        }
                    }
                }
            }
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", v.name())?;
            } else {
                write!(f, "{}^{}", v.name(), e)?;
            }
        }
        Ok(())
    }
}

/// The grading of a space of sections: degree in {X₀,Y₀,Z₀}, degree in the
/// binary-form slot (x₀,y₀), and one degree per projective-line factor.
/// A negative factor entry denotes the zero space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multidegree {
    pub sym: usize,
    pub vertex0: usize,
    pub factors: Vec<i64>,
}

impl Multidegree {
    pub fn factors(factors: Vec<i64>) -> Multidegree {
        Multidegree {
            sym: 0,
            vertex0: 0,
            factors,
        }
    }

    pub fn with_sym(sym: usize, factors: Vec<i64>) -> Multidegree {
        Multidegree {
            sym,
            vertex0: 0,
            factors,
        }
    }

    pub fn with_vertex0(vertex0: usize, factors: Vec<i64>) -> Multidegree {
        Multidegree {
            sym: 0,
            vertex0,
            factors,
        }
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    /// Some factor is negative, so the graded piece is the zero space.
    pub fn is_zero_space(&self) -> bool {
        self.factors.iter().any(|&d| d < 0)
    }

    /// Parity obstruction: weights are all odd when this is odd, so there
    /// are no invariants.
    pub fn parity(&self) -> i64 {
        (self.factors.iter().sum::<i64>() + self.vertex0 as i64).rem_euclid(2)
    }

    /// Canonical key used for cache files and reports.
    pub fn key(&self) -> String {
        let fs: Vec<String> = self.factors.iter().map(|d| d.to_string()).collect();
        format!("s{}-v{}-{}", self.sym, self.vertex0, fs.join("_"))
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fs: Vec<String> = self.factors.iter().map(|d| d.to_string()).collect();
        write!(f, "(sym {}; v0 {}; {})", self.sym, self.vertex0, fs.join(","))
    }
}

/// Sparse polynomial over ℚ. No zero coefficients are stored; the term map
/// is ordered, so iteration and serialization are canonical.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: Var) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::var(v), Rational::one());
        p
    }

    pub fn monomial(m: Monomial, c: Rational) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending graded-lex order.
    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The graded-lex largest monomial.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(t, v)| (t.mul(m), v * c))
                .collect(),
        }
    }

    /// Every monomial has the same h-weight `w`.
    pub fn is_isobaric(&self, w: i64) -> bool {
        self.terms.keys().all(|m| m.weight() == w)
    }

    /// Checks the polynomial is homogeneous of multidegree `l` (and uses no
    /// variables beyond the factors of `l`).
    pub fn is_homogeneous_of(&self, l: &Multidegree) -> bool {
        self.terms.keys().all(|m| {
            if m.sym_degree() != l.sym || m.slot_degree(0) != l.vertex0 {
                return false;
            }
            if let Some(top) = m.max_slot() {
                if top > l.n() {
                    return false;
                }
            }
            (1..=l.n()).all(|i| m.slot_degree(i) as i64 == l.factors[i - 1])
        })
    }
}

impl fmt::Display for Polynomial {
    /// Canonical text: terms in descending graded-lex order, explicit
    /// rational coefficients, `*` between coefficient and variables.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

pub fn parse_polynomial(s: &str) -> Result<Polynomial> {
    let s = s.trim();
    if s == "0" {
        return Ok(Polynomial::zero());
    }
    let mut p = Polynomial::zero();
    for term in s.split(" + ") {
        let mut parts = term.split('*');
        let coeff_str = parts
            .next()
            .ok_or_else(|| Error::Parse(format!("empty term in `{s}`")))?;
        let coeff: Rational = coeff_str
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient `{coeff_str}`")))?;
        let mut exps = Vec::new();
        for part in parts {
            let (name, exp) = match part.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<u16>()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{part}`")))?,
                ),
                None => (part, 1),
            };
            exps.push((Var::parse(name.trim())?, exp));
        }
        p.add_term(Monomial::from_exponents(exps), coeff);
    }
    Ok(p)
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in rhs.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in rhs.iter() {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in self.iter() {
            for (m2, c2) in rhs.iter() {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

/// The Plücker minor p_{ik} = xᵢyₖ − xₖyᵢ; index 0 is the binary-form slot.
pub fn plucker(i: usize, k: usize) -> Result<Polynomial> {
    if i == k {
        return Err(Error::SelfLoop(i));
    }
    let mut p = Polynomial::zero();
    p.add_term(
        Monomial::from_exponents([(Var::x(i), 1), (Var::y(k), 1)]),
        Rational::one(),
    );
    p.add_term(
        Monomial::from_exponents([(Var::x(k), 1), (Var::y(i), 1)]),
        -Rational::one(),
    );
    Ok(p)
}

/// The canonical equivariant section sᵢ = xᵢ²Z₀ − 2xᵢyᵢY₀ + yᵢ²X₀.
pub fn s_section(i: usize) -> Polynomial {
    assert!(i >= 1, "sections are indexed by factors 1..=n");
    let mut p = Polynomial::zero();
    p.add_term(
        Monomial::from_exponents([(Var::x(i), 2), (Var::SYM_Z, 1)]),
        Rational::one(),
    );
    p.add_term(
        Monomial::from_exponents([(Var::x(i), 1), (Var::y(i), 1), (Var::SYM_Y, 1)]),
        -Rational::from_integer(2.into()),
    );
    p.add_term(
        Monomial::from_exponents([(Var::y(i), 2), (Var::SYM_X, 1)]),
        Rational::one(),
    );
    p
}

/// The invariant conic X₀Z₀ − Y₀².
pub fn conic() -> Polynomial {
    let mut p = Polynomial::zero();
    p.add_term(
        Monomial::from_exponents([(Var::SYM_X, 1), (Var::SYM_Z, 1)]),
        Rational::one(),
    );
    p.add_term(
        Monomial::from_exponents([(Var::SYM_Y, 2)]),
        -Rational::one(),
    );
    p
}

fn apply_derivation<F>(p: &Polynomial, rule: F) -> Polynomial
where
    F: Fn(Var) -> Option<(Var, i64)>,
{
    let mut out = Polynomial::zero();
    for (m, c) in p.iter() {
        for (v, e) in m.iter() {
            let Some((w, k)) = rule(v) else { continue };
            let coeff = c * Rational::from_integer((k * e as i64).into());
            let mono = Monomial::from_exponents(
                m.iter()
                    .map(|(u, f)| if u == v { (u, f - 1) } else { (u, f) })
                    .chain([(w, 1)]),
            );
            out.add_term(mono, coeff);
        }
    }
    out
}

/// The raising operator: xᵢ∂/∂yᵢ on every coordinate pair, and
/// X₀∂/∂Y₀ + 2Y₀∂/∂Z₀ on the symmetric variables.
pub fn apply_e(p: &Polynomial) -> Polynomial {
    apply_derivation(p, |v| match v {
        Var::SYM_X => None,
        Var::SYM_Y => Some((Var::SYM_X, 1)),
        Var::SYM_Z => Some((Var::SYM_Y, 2)),
        _ => {
            let slot = v.slot().unwrap();
            if v == Var::y(slot) {
                Some((Var::x(slot), 1))
            } else {
                None
            }
        }
    })
}

/// The lowering operator: yᵢ∂/∂xᵢ on every coordinate pair, and
/// 2Y₀∂/∂X₀ + Z₀∂/∂Y₀ on the symmetric variables.
pub fn apply_f(p: &Polynomial) -> Polynomial {
    apply_derivation(p, |v| match v {
        Var::SYM_X => Some((Var::SYM_Y, 2)),
        Var::SYM_Y => Some((Var::SYM_Z, 1)),
        Var::SYM_Z => None,
        _ => {
            let slot = v.slot().unwrap();
            if v == Var::x(slot) {
                Some((Var::y(slot), 1))
            } else {
                None
            }
        }
    })
}

/// The torus generator: multiplies each monomial by its weight.
pub fn apply_h(p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.iter() {
        let w = m.weight();
        if w != 0 {
            out.add_term(m.clone(), c * Rational::from_integer(w.into()));
        }
    }
    out
}

/// Substitutes X₀ ↦ x₀², Y₀ ↦ x₀y₀, Z₀ ↦ y₀² (restriction to the rational
/// normal curve); intertwines the sl₂ operators.
pub fn subst0(p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.iter() {
        let (a, b, z) = m.sym_exponents();
        let mono = Monomial::from_exponents(
            m.iter()
                .filter(|(v, _)| !v.is_sym())
                .chain([(Var::x(0), 2 * a + b), (Var::y(0), b + 2 * z)]),
        );
        out.add_term(mono, c.clone());
    }
    out
}

/// Monomial basis of the degree-m piece of ℚ[X₀,Y₀,Z₀], graded-lex descending.
fn sym_monomials(m: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in (0..=m).rev() {
        for b in (0..=m - a).rev() {
            let c = m - a - b;
            out.push(Monomial::from_exponents([
                (Var::SYM_X, a as u16),
                (Var::SYM_Y, b as u16),
                (Var::SYM_Z, c as u16),
            ]));
        }
    }
    out
}

/// The equivariant second-order operator 4∂X₀∂Z₀ − ∂²Y₀ whose kernel in each
/// symmetric power is the top irreducible summand.
fn laplace(p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.iter() {
        let (a, b, z) = m.sym_exponents();
        if a >= 1 && z >= 1 {
            let mono = Monomial::from_exponents(
                m.iter()
                    .filter(|(v, _)| !v.is_sym())
                    .chain([(Var::SYM_X, a - 1), (Var::SYM_Y, b), (Var::SYM_Z, z - 1)]),
            );
            out.add_term(
                mono,
                c * Rational::from_integer((4 * a as i64 * z as i64).into()),
            );
        }
        if b >= 2 {
            let mono = Monomial::from_exponents(
                m.iter()
                    .filter(|(v, _)| !v.is_sym())
                    .chain([(Var::SYM_X, a), (Var::SYM_Y, b - 2), (Var::SYM_Z, z)]),
            );
            out.add_term(
                mono,
                -(c * Rational::from_integer((b as i64 * (b as i64 - 1)).into())),
            );
        }
    }
    out
}

struct SplitTables {
    /// basis of the degree-(m−2) symmetric piece
    low_monos: Vec<Monomial>,
    low_index: HashMap<Monomial, usize>,
    /// matrix of B ↦ laplace(conic · B) on that basis (an automorphism)
    t_mat: SparseMatrix,
}

struct LiftTables {
    sym_monos: Vec<Monomial>,
    /// stacked constraints [subst0 ; laplace] with unique solution per image
    mat: SparseMatrix,
    row_index: HashMap<Monomial, usize>,
    rows: usize,
}

fn split_tables(m: usize) -> Arc<SplitTables> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<SplitTables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(m)
        .or_insert_with(|| {
            let low_monos = sym_monomials(m - 2);
            let low_index: HashMap<Monomial, usize> = low_monos
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, mono)| (mono, i))
                .collect();
            let dim = low_monos.len();
            let c = conic();
            let mut t_mat = SparseMatrix::new(dim, dim);
            for (col, mono) in low_monos.iter().enumerate() {
                let image = laplace(&c.mul_monomial(mono, &Rational::one()));
                for (im, coeff) in image.iter() {
                    t_mat.set(low_index[im], col, coeff.clone());
                }
            }
            Arc::new(SplitTables {
                low_monos,
                low_index,
                t_mat,
            })
        })
        .clone()
}

fn lift_tables(m: usize) -> Arc<LiftTables> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<LiftTables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(m)
        .or_insert_with(|| {
            let sym = sym_monomials(m);
            let mut row_index: HashMap<Monomial, usize> = HashMap::new();
            // rows for the binary monomials x₀^k y₀^{2m-k}
            for k in 0..=2 * m {
                let mono = Monomial::from_exponents([
                    (Var::x(0), k as u16),
                    (Var::y(0), (2 * m - k) as u16),
                ]);
                let next = row_index.len();
                row_index.insert(mono, next);
            }
            // rows for the laplace image
            if m >= 2 {
                for mono in sym_monomials(m - 2) {
                    let next = row_index.len();
                    row_index.insert(mono, next);
                }
            }
            let rows = row_index.len();
            let mut mat = SparseMatrix::new(rows, sym.len());
            for (col, mono) in sym.iter().enumerate() {
                let p = Polynomial::monomial(mono.clone(), Rational::one());
                for (im, coeff) in subst0(&p).iter() {
                    mat.set(row_index[im], col, coeff.clone());
                }
                for (im, coeff) in laplace(&p).iter() {
                    mat.set(row_index[im], col, coeff.clone());
                }
            }
            Arc::new(LiftTables {
                sym_monos: sym,
                mat,
                row_index,
                rows,
            })
        })
        .clone()
}

/// Splits a polynomial of symmetric degree m along
/// S^m ≅ V_{2m} ⊕ (X₀Z₀−Y₀²)·S^{m−2}: returns `(top, rest)` with
/// `p = lift(top) + (X₀Z₀−Y₀²)·rest`, where `top` carries vertex-0 degree 2m
/// and `rest` has symmetric degree m−2. The lift is the unique equivariant
/// section of `subst0`.
pub fn split_symmetric(p: &Polynomial) -> (Polynomial, Polynomial) {
    let m = match p.leading_monomial() {
        Some(mono) => mono.sym_degree(),
        None => return (Polynomial::zero(), Polynomial::zero()),
    };
    debug_assert!(
        p.iter().all(|(mono, _)| mono.sym_degree() == m),
        "split_symmetric expects symmetric-homogeneous input"
    );
    if m <= 1 {
        return (subst0(p), Polynomial::zero());
    }
    let tables = split_tables(m);
    // Solve laplace(conic·B) = laplace(p) groupwise in the non-symmetric part.
    let dp = laplace(p);
    let mut groups: BTreeMap<Monomial, Vec<(usize, Rational)>> = BTreeMap::new();
    for (mono, c) in dp.iter() {
        let (a, b, z) = mono.sym_exponents();
        let sym_mono = Monomial::from_exponents([
            (Var::SYM_X, a),
            (Var::SYM_Y, b),
            (Var::SYM_Z, z),
        ]);
        let rest_mono = Monomial::from_exponents(mono.iter().filter(|(v, _)| !v.is_sym()));
        groups
            .entry(rest_mono)
            .or_default()
            .push((tables.low_index[&sym_mono], c.clone()));
    }
    let mut rest = Polynomial::zero();
    for (rest_mono, entries) in groups {
        let rhs = Vector::from_entries(tables.low_monos.len(), entries);
        let sol = tables
            .t_mat
            .solve(&rhs)
            .expect("split system shape")
            .expect("the conic-multiplication operator is invertible");
        for (idx, coeff) in sol.iter() {
            rest.add_term(tables.low_monos[idx].mul(&rest_mono), coeff.clone());
        }
    }
    let harmonic = p - &(&conic() * &rest);
    (subst0(&harmonic), rest)
}

/// The unique equivariant section of `subst0`: lifts a polynomial of
/// vertex-0 degree 2m to a polynomial of symmetric degree m in the kernel of
/// the invariant-conic operator, so that `subst0(lift(p)) = p`.
pub fn lift_to_sym(p: &Polynomial) -> Polynomial {
    let deg0 = match p.leading_monomial() {
        Some(mono) => mono.slot_degree(0),
        None => return Polynomial::zero(),
    };
    debug_assert!(
        deg0 % 2 == 0 && p.iter().all(|(mono, _)| mono.slot_degree(0) == deg0),
        "lift_to_sym expects even vertex-0-homogeneous input"
    );
    let m = deg0 / 2;
    let tables = lift_tables(m);
    let mut groups: BTreeMap<Monomial, Vec<(usize, Rational)>> = BTreeMap::new();
    for (mono, c) in p.iter() {
        let v0_mono = Monomial::from_exponents([
            (Var::x(0), mono.exponent(Var::x(0))),
            (Var::y(0), mono.exponent(Var::y(0))),
        ]);
        let rest_mono = Monomial::from_exponents(
            mono.iter().filter(|(v, _)| v.slot() != Some(0)),
        );
        groups
            .entry(rest_mono)
            .or_default()
            .push((tables.row_index[&v0_mono], c.clone()));
    }
    let mut out = Polynomial::zero();
    for (rest_mono, entries) in groups {
        let rhs = Vector::from_entries(tables.rows, entries);
        let sol = tables
            .mat
            .solve(&rhs)
            .expect("lift system shape")
            .expect("harmonic lift exists and is unique");
        for (idx, coeff) in sol.iter() {
            out.add_term(tables.sym_monos[idx].mul(&rest_mono), coeff.clone());
        }
    }
    out
}

/// Exact evaluation at a point. Every variable of `p` must be assigned.
pub fn evaluate(p: &Polynomial, point: &BTreeMap<Var, Rational>) -> Result<Rational> {
    let mut total = Rational::zero();
    for (m, c) in p.iter() {
        let mut term = c.clone();
        for (v, e) in m.iter() {
            let val = point
                .get(&v)
                .ok_or_else(|| Error::MissingAssignment(v.name()))?;
            for _ in 0..e {
                term *= val;
            }
        }
        total += term;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }

    fn rat2(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    pub fn random_polynomial(rng: &mut ChaCha8Rng, nslots: usize, terms: usize) -> Polynomial {
        let mut p = Polynomial::zero();
        for _ in 0..terms {
            let mut exps = Vec::new();
            for _ in 0..rng.gen_range(1..=4) {
                let which = rng.gen_range(0..(3 + 2 * nslots));
                let v = match which {
                    0 => Var::SYM_X,
                    1 => Var::SYM_Y,
                    2 => Var::SYM_Z,
                    k if (k - 3) % 2 == 0 => Var::x((k - 3) / 2),
                    k => Var::y((k - 3) / 2),
                };
                exps.push((v, rng.gen_range(1..=3) as u16));
            }
            p.add_term(
                Monomial::from_exponents(exps),
                rat(rng.gen_range(-9..=9i64)),
            );
        }
        p
    }

    fn random_point(rng: &mut ChaCha8Rng, nslots: usize) -> BTreeMap<Var, Rational> {
        let mut point = BTreeMap::new();
        point.insert(Var::SYM_X, rat(rng.gen_range(-5..=5)));
        point.insert(Var::SYM_Y, rat(rng.gen_range(-5..=5)));
        point.insert(Var::SYM_Z, rat(rng.gen_range(-5..=5)));
        for i in 0..=nslots {
            point.insert(Var::x(i), rat(rng.gen_range(-5..=5)));
            point.insert(Var::y(i), rat(rng.gen_range(-5..=5)));
        }
        point
    }

    #[test]
    fn plucker_formula() {
        let p = plucker(1, 2).unwrap();
        let mut expect = Polynomial::zero();
        expect.add_term(
            Monomial::from_exponents([(Var::x(1), 1), (Var::y(2), 1)]),
            rat(1),
        );
        expect.add_term(
            Monomial::from_exponents([(Var::x(2), 1), (Var::y(1), 1)]),
            rat(-1),
        );
        assert_eq!(p, expect);
        assert_eq!(plucker(2, 1).unwrap(), -&p);
        assert!(plucker(3, 3).is_err());
        // vertex-0 slot uses the same formula
        let q = plucker(0, 3).unwrap();
        assert_eq!(
            q.coefficient(&Monomial::from_exponents([(Var::x(0), 1), (Var::y(3), 1)])),
            rat(1)
        );
    }

    #[test]
    fn section_formula_and_invariance() {
        let s = s_section(1);
        assert_eq!(
            s.coefficient(&Monomial::from_exponents([(Var::x(1), 2), (Var::SYM_Z, 1)])),
            rat(1)
        );
        assert_eq!(
            s.coefficient(&Monomial::from_exponents([
                (Var::x(1), 1),
                (Var::y(1), 1),
                (Var::SYM_Y, 1)
            ])),
            rat(-2)
        );
        assert!(apply_e(&s).is_zero());
        assert!(apply_f(&s).is_zero());
        assert!(apply_h(&s).is_zero());
        // s_i restricts to the square of the vertex-0 Plücker minor
        let p01 = plucker(0, 1).unwrap();
        assert_eq!(subst0(&s), &p01 * &p01);
    }

    #[test]
    fn operators_annihilate_plucker_minors() {
        for (i, k) in [(1, 2), (0, 3), (2, 4)] {
            let p = plucker(i, k).unwrap();
            assert!(apply_e(&p).is_zero());
            assert!(apply_f(&p).is_zero());
            assert!(apply_h(&p).is_zero());
        }
    }

    #[test]
    fn operator_examples() {
        assert_eq!(apply_e(&Polynomial::var(Var::SYM_Z)), Polynomial::var(Var::SYM_Y).scale(&rat(2)));
        // weight of x₁³y₁ is 3-1 = 2
        let m = Monomial::from_exponents([(Var::x(1), 3), (Var::y(1), 1)]);
        let p = Polynomial::monomial(m.clone(), rat(1));
        assert_eq!(apply_h(&p), p.scale(&rat(2)));
    }

    #[test]
    fn bracket_relations_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let p = random_polynomial(&mut rng, 2, 5);
            let he = apply_h(&apply_e(&p));
            let eh = apply_e(&apply_h(&p));
            assert_eq!(&he - &eh, apply_e(&p).scale(&rat(2)));
            let ef = apply_e(&apply_f(&p));
            let fe = apply_f(&apply_e(&p));
            assert_eq!(&ef - &fe, apply_h(&p));
            let hf = apply_h(&apply_f(&p));
            let fh = apply_f(&apply_h(&p));
            assert_eq!(&hf - &fh, apply_f(&p).scale(&rat(-2)));
        }
    }

    #[test]
    fn subst0_examples() {
        assert!(subst0(&conic()).is_zero());
        assert_eq!(
            subst0(&Polynomial::var(Var::SYM_X)),
            Polynomial::monomial(Monomial::from_exponents([(Var::x(0), 2)]), rat(1))
        );
    }

    #[test]
    fn subst0_intertwines_operators() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = random_polynomial(&mut rng, 2, 4);
            assert_eq!(subst0(&apply_e(&p)), apply_e(&subst0(&p)));
            assert_eq!(subst0(&apply_f(&p)), apply_f(&subst0(&p)));
        }
    }

    #[test]
    fn subst0_intertwines_section_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p01 = plucker(0, 1).unwrap();
        let sq = &p01 * &p01;
        for _ in 0..20 {
            let p = random_polynomial(&mut rng, 1, 4);
            assert_eq!(subst0(&(&s_section(1) * &p)), &sq * &subst0(&p));
        }
    }

    #[test]
    fn split_conic_example() {
        let (top, rest) = split_symmetric(&conic());
        assert!(top.is_zero());
        assert_eq!(rest, Polynomial::one());
    }

    #[test]
    fn split_y0_squared_example() {
        let m = Monomial::from_exponents([(Var::SYM_Y, 2)]);
        let p = Polynomial::monomial(m, rat(1));
        let (top, rest) = split_symmetric(&p);
        assert_eq!(rest, Polynomial::constant(rat2(-1, 3)));
        let reconstructed = &p - &conic().scale(&rat2(-1, 3));
        assert_eq!(top, subst0(&reconstructed));
    }

    #[test]
    fn split_degree_one_is_subst0() {
        let p = Polynomial::var(Var::SYM_X);
        let (top, rest) = split_symmetric(&p);
        assert!(rest.is_zero());
        assert_eq!(top, subst0(&p));
    }

    #[test]
    fn split_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for m in 2..=5usize {
            for _ in 0..10 {
                // random symmetric-degree-m polynomial with a factor part
                let mut p = Polynomial::zero();
                for _ in 0..4 {
                    let a = rng.gen_range(0..=m);
                    let b = rng.gen_range(0..=m - a);
                    let c = m - a - b;
                    let mono = Monomial::from_exponents([
                        (Var::SYM_X, a as u16),
                        (Var::SYM_Y, b as u16),
                        (Var::SYM_Z, c as u16),
                        (Var::x(1), rng.gen_range(0..=2) as u16),
                        (Var::y(2), rng.gen_range(0..=2) as u16),
                    ]);
                    p.add_term(mono, rat(rng.gen_range(-9..=9)));
                }
                let (top, rest) = split_symmetric(&p);
                let lifted = lift_to_sym(&top);
                let reconstructed = &lifted + &(&conic() * &rest);
                assert_eq!(reconstructed, p);
                // the lift is a section of subst0 and is harmonic
                assert_eq!(subst0(&lifted), top);
                assert!(laplace(&lifted).is_zero());
            }
        }
    }

    #[test]
    fn lift_intertwines_operators() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            // a random vertex-0 form of even degree
            let mut p = Polynomial::zero();
            let deg = 2 * rng.gen_range(1..=3usize);
            for _ in 0..3 {
                let k = rng.gen_range(0..=deg);
                p.add_term(
                    Monomial::from_exponents([
                        (Var::x(0), k as u16),
                        (Var::y(0), (deg - k) as u16),
                    ]),
                    rat(rng.gen_range(-9..=9)),
                );
            }
            assert_eq!(lift_to_sym(&apply_e(&p)), apply_e(&lift_to_sym(&p)));
            assert_eq!(lift_to_sym(&apply_f(&p)), apply_f(&lift_to_sym(&p)));
        }
    }

    #[test]
    fn evaluate_examples() {
        let p = plucker(1, 2).unwrap();
        let mut point = BTreeMap::new();
        point.insert(Var::x(1), rat(1));
        point.insert(Var::y(1), rat(0));
        point.insert(Var::x(2), rat(0));
        point.insert(Var::y(2), rat(1));
        assert_eq!(evaluate(&p, &point).unwrap(), rat(1));
        assert_eq!(evaluate(&Polynomial::zero(), &BTreeMap::new()).unwrap(), rat(0));
        assert!(matches!(
            evaluate(&p, &BTreeMap::new()),
            Err(Error::MissingAssignment(_))
        ));
    }

    #[test]
    fn evaluate_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let p = random_polynomial(&mut rng, 2, 4);
            let q = random_polynomial(&mut rng, 2, 4);
            let pt = random_point(&mut rng, 2);
            let lhs = evaluate(&(&p * &q), &pt).unwrap();
            let rhs = evaluate(&p, &pt).unwrap() * evaluate(&q, &pt).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..30 {
            let mut p = random_polynomial(&mut rng, 3, 5);
            p.add_term(Monomial::one(), rat2(7, 3));
            let text = p.to_string();
            let back = parse_polynomial(&text).unwrap();
            assert_eq!(back, p, "round trip failed for `{text}`");
        }
        assert_eq!(parse_polynomial("0").unwrap(), Polynomial::zero());
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let x0sq = Monomial::from_exponents([(Var::SYM_X, 2)]);
        let x0y0 = Monomial::from_exponents([(Var::SYM_X, 1), (Var::SYM_Y, 1)]);
        let y0sq = Monomial::from_exponents([(Var::SYM_Y, 2)]);
        let x0 = Monomial::from_exponents([(Var::SYM_X, 1)]);
        assert!(x0sq > x0y0 && x0y0 > y0sq);
        assert!(x0 < y0sq); // lower total degree
    }
}
