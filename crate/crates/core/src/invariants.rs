//! Bases and dimensions of SL₂-invariant subspaces.
//!
//! The dimension of the invariants in a multigraded piece is a weight count
//! (multiplicity of weight 0 minus multiplicity of weight 2). A basis is
//! realized inside the polynomial ring as the kernel of the raising operator
//! on the weight-0 monomial span; at weight zero a highest-weight vector is
//! an invariant, and annihilation by the lowering operator is asserted as a
//! guard rather than assumed. Bases are memoized in memory and optionally on
//! disk (one canonical-text polynomial per line, atomic rename on write).

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use num::{One, Zero};

use crate::linalg::{Rational, SparseMatrix, Vector};
use crate::poly::{apply_e, apply_f, parse_polynomial, Monomial, Multidegree, Polynomial, Var};
use crate::{Error, Result};

/// An ordered basis of the invariants of one multidegree, with enough
/// indexing to express arbitrary invariants in it by coefficient lookup.
#[derive(Debug)]
pub struct InvariantBasis {
    pub degree: Multidegree,
    /// Ordered by graded-lex leading monomial, largest first.
    pub basis: Vec<Polynomial>,
    /// Per element: a monomial supported in that element only, and its
    /// coefficient there. Coordinates of an invariant are read off at these
    /// monomials.
    index: Vec<(Monomial, Rational)>,
}

impl InvariantBasis {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of `p` in this basis. `p` must be an invariant of the
    /// basis multidegree: homogeneous of the right degree and annihilated by
    /// both the raising and lowering operators (checked). Any such invariant
    /// lies in the span, so the lookup is exact.
    pub fn coordinates(&self, p: &Polynomial) -> Result<Vector> {
        if p.is_zero() {
            return Ok(Vector::zero(self.len()));
        }
        if !p.is_homogeneous_of(&self.degree) {
            return Err(Error::NotInvariant(format!(
                "wrong multidegree, expected {}",
                self.degree
            )));
        }
        if !p.is_isobaric(0) || !apply_e(p).is_zero() || !apply_f(p).is_zero() {
            return Err(Error::NotInvariant(
                "not annihilated by the sl2 operators".into(),
            ));
        }
        let entries: Vec<(usize, Rational)> = self
            .index
            .iter()
            .enumerate()
            .filter_map(|(k, (mono, scale))| {
                let c = p.coefficient(mono);
                if c.is_zero() {
                    None
                } else {
                    Some((k, c / scale))
                }
            })
            .collect();
        Ok(Vector::from_entries(self.len(), entries))
    }

    /// The linear combination with the given coordinates.
    pub fn combination(&self, coords: &Vector) -> Polynomial {
        let mut out = Polynomial::zero();
        for (k, c) in coords.iter() {
            out = &out + &self.basis[k].scale(c);
        }
        out
    }
}

/// Distribution of h-weights in the monomial basis of the multidegree,
/// as counts indexed by (weight + offset)/1 with the returned offset.
fn weight_counts(l: &Multidegree) -> (Vec<u64>, i64) {
    // span of possible weights
    let spread: i64 =
        2 * l.sym as i64 + l.vertex0 as i64 + l.factors.iter().map(|d| d.max(&0)).sum::<i64>();
    let size = (2 * spread + 1) as usize;
    let offset = spread;
    let mut counts = vec![0u64; size.max(1)];
    counts[offset as usize] = 1;
    let convolve = |counts: &mut Vec<u64>, weights: &[i64]| {
        let mut next = vec![0u64; counts.len()];
        for (idx, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &w in weights {
                next[(idx as i64 + w) as usize] += c;
            }
        }
        *counts = next;
    };
    if l.sym > 0 {
        let mut ws = Vec::new();
        for a in 0..=l.sym {
            for b in 0..=(l.sym - a) {
                let c = l.sym - a - b;
                ws.push(2 * (a as i64 - c as i64));
            }
        }
        convolve(&mut counts, &ws);
    }
    if l.vertex0 > 0 {
        let v = l.vertex0 as i64;
        let ws: Vec<i64> = (0..=v).map(|a| 2 * a - v).collect();
        convolve(&mut counts, &ws);
    }
    for &d in &l.factors {
        if d > 0 {
            let ws: Vec<i64> = (0..=d).map(|a| 2 * a - d).collect();
            convolve(&mut counts, &ws);
        }
    }
    (counts, offset)
}

/// Dimension of the invariant subspace: the multiplicity of weight 0 minus
/// the multiplicity of weight 2 in the monomial weight distribution. Zero
/// when the total degree is odd or some factor degree is negative.
pub fn invariant_dim(l: &Multidegree) -> usize {
    if l.is_zero_space() || l.parity() != 0 {
        return 0;
    }
    let (counts, offset) = weight_counts(l);
    let at = |w: i64| -> i64 {
        let idx = w + offset;
        if idx < 0 || idx as usize >= counts.len() {
            0
        } else {
            counts[idx as usize] as i64
        }
    };
    let dim = at(0) - at(2);
    assert!(dim >= 0, "weight multiplicities are unimodal from the top");
    dim as usize
}

/// All monomials of the multidegree with h-weight `w`, graded-lex descending.
pub fn weight_space_monomials(l: &Multidegree, w: i64) -> Vec<Monomial> {
    if l.is_zero_space() {
        return Vec::new();
    }
    // per-slot choices: (weight, exponents)
    let mut slots: Vec<Vec<(i64, Vec<(Var, u16)>)>> = Vec::new();
    if l.sym > 0 {
        let mut choices = Vec::new();
        for a in 0..=l.sym {
            for b in 0..=(l.sym - a) {
                let c = l.sym - a - b;
                choices.push((
                    2 * (a as i64 - c as i64),
                    vec![
                        (Var::SYM_X, a as u16),
                        (Var::SYM_Y, b as u16),
                        (Var::SYM_Z, c as u16),
                    ],
                ));
            }
        }
        slots.push(choices);
    }
    if l.vertex0 > 0 {
        let v = l.vertex0;
        slots.push(
            (0..=v)
                .map(|a| {
                    (
                        2 * a as i64 - v as i64,
                        vec![(Var::x(0), a as u16), (Var::y(0), (v - a) as u16)],
                    )
                })
                .collect(),
        );
    }
    for (i, &d) in l.factors.iter().enumerate() {
        if d > 0 {
            let slot = i + 1;
            slots.push(
                (0..=d)
                    .map(|a| {
                        (
                            2 * a - d,
                            vec![(Var::x(slot), a as u16), (Var::y(slot), (d - a) as u16)],
                        )
                    })
                    .collect(),
            );
        }
    }
    // suffix weight bounds for pruning
    let mut min_suffix = vec![0i64; slots.len() + 1];
    let mut max_suffix = vec![0i64; slots.len() + 1];
    for i in (0..slots.len()).rev() {
        let lo = slots[i].iter().map(|&(w, _)| w).min().unwrap();
        let hi = slots[i].iter().map(|&(w, _)| w).max().unwrap();
        min_suffix[i] = min_suffix[i + 1] + lo;
        max_suffix[i] = max_suffix[i + 1] + hi;
    }
    let mut out = Vec::new();
    let mut stack: Vec<(Var, u16)> = Vec::new();
    fn rec(
        slots: &[Vec<(i64, Vec<(Var, u16)>)>],
        min_suffix: &[i64],
        max_suffix: &[i64],
        depth: usize,
        remaining: i64,
        stack: &mut Vec<(Var, u16)>,
        out: &mut Vec<Monomial>,
    ) {
        if depth == slots.len() {
            if remaining == 0 {
                out.push(Monomial::from_exponents(stack.iter().copied()));
            }
            return;
        }
        for (w, exps) in &slots[depth] {
            let rest = remaining - w;
            if rest < min_suffix[depth + 1] || rest > max_suffix[depth + 1] {
                continue;
            }
            let mark = stack.len();
            stack.extend(exps.iter().copied());
            rec(slots, min_suffix, max_suffix, depth + 1, rest, stack, out);
            stack.truncate(mark);
        }
    }
    rec(&slots, &min_suffix, &max_suffix, 0, w, &mut stack, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

fn compute_basis(l: &Multidegree) -> InvariantBasis {
    let expected = invariant_dim(l);
    if expected == 0 {
        return InvariantBasis {
            degree: l.clone(),
            basis: Vec::new(),
            index: Vec::new(),
        };
    }
    let cols = weight_space_monomials(l, 0);
    // raising-operator matrix from the weight-0 span into the weight-2 span
    let mut row_index: HashMap<Monomial, usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, Rational)> = Vec::new();
    for (j, mono) in cols.iter().enumerate() {
        let image = apply_e(&Polynomial::monomial(mono.clone(), Rational::one()));
        for (im, c) in image.iter() {
            let next = row_index.len();
            let r = *row_index.entry(im.clone()).or_insert(next);
            entries.push((r, j, c.clone()));
        }
    }
    let mut mat = SparseMatrix::new(row_index.len(), cols.len());
    for (r, c, v) in entries {
        mat.set(r, c, v);
    }
    let kernel = mat.kernel_basis();
    assert_eq!(
        kernel.len(),
        expected,
        "kernel dimension disagrees with the weight count at {l}"
    );
    let mut basis: Vec<Polynomial> = kernel
        .iter()
        .map(|v| {
            let mut p = Polynomial::zero();
            for (idx, c) in v.iter() {
                p.add_term(cols[idx].clone(), c.clone());
            }
            p
        })
        .collect();
    for p in &basis {
        assert!(
            apply_f(p).is_zero(),
            "weight-0 kernel element not annihilated by the lowering operator at {l}"
        );
    }
    basis.sort_by(|a, b| {
        b.leading_monomial()
            .cmp(&a.leading_monomial())
            .then_with(|| a.cmp(b))
    });
    let index = derive_index(&basis).expect("fresh kernel basis has singleton monomials");
    InvariantBasis {
        degree: l.clone(),
        basis,
        index,
    }
}

/// For each element find a monomial supported in that element alone (the
/// free columns of the kernel computation guarantee one exists).
fn derive_index(basis: &[Polynomial]) -> Option<Vec<(Monomial, Rational)>> {
    let mut support: BTreeMap<&Monomial, (usize, usize)> = BTreeMap::new(); // count, owner
    for (k, p) in basis.iter().enumerate() {
        for (m, _) in p.iter() {
            let e = support.entry(m).or_insert((0, k));
            e.0 += 1;
            e.1 = k;
        }
    }
    let mut index: Vec<Option<(Monomial, Rational)>> = vec![None; basis.len()];
    for (m, (count, owner)) in support {
        if count == 1 && index[owner].is_none() {
            index[owner] = Some((m.clone(), basis[owner].coefficient(m)));
        }
    }
    index.into_iter().collect()
}

// ---------------------------------------------------------------------------
// caching

/// Where invariant bases are persisted between runs.
#[derive(Debug, Clone, Default)]
pub enum CacheSetting {
    /// `BOTT_CACHE_DIR`, else a per-user cache directory.
    #[default]
    Default,
    Disabled,
    Dir(PathBuf),
}

fn cache_setting() -> &'static Mutex<CacheSetting> {
    static SETTING: OnceLock<Mutex<CacheSetting>> = OnceLock::new();
    SETTING.get_or_init(|| Mutex::new(CacheSetting::Default))
}

pub fn set_cache_dir(setting: CacheSetting) {
    *cache_setting().lock().unwrap() = setting;
}

/// Resolved on every call so tests and the CLI can redirect it.
pub fn cache_dir() -> Option<PathBuf> {
    match cache_setting().lock().unwrap().clone() {
        CacheSetting::Disabled => None,
        CacheSetting::Dir(d) => Some(d),
        CacheSetting::Default => {
            if let Ok(dir) = std::env::var("BOTT_CACHE_DIR") {
                return Some(PathBuf::from(dir));
            }
            if let Ok(dir) = std::env::var("XDG_CACHE_HOME") {
                return Some(PathBuf::from(dir).join("bott"));
            }
            if let Ok(home) = std::env::var("HOME") {
                return Some(PathBuf::from(home).join(".cache").join("bott"));
            }
            Some(std::env::temp_dir().join("bott-cache"))
        }
    }
}

fn memo() -> &'static Mutex<HashMap<Multidegree, Arc<InvariantBasis>>> {
    static MEMO: OnceLock<Mutex<HashMap<Multidegree, Arc<InvariantBasis>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Drops all in-memory bases (the disk cache is untouched).
pub fn clear_memory_cache() {
    memo().lock().unwrap().clear();
}

fn cache_path(l: &Multidegree) -> Option<PathBuf> {
    cache_dir().map(|d| d.join(format!("inv-{}.txt", l.key())))
}

fn load_from_disk(l: &Multidegree) -> Option<InvariantBasis> {
    load_from_path(l, &cache_path(l)?)
}

fn load_from_path(l: &Multidegree, path: &std::path::Path) -> Option<InvariantBasis> {
    let text = std::fs::read_to_string(path).ok()?;
    let mut lines = text.lines();
    let header = lines.next()?;
    let expected_header = format!(
        "multidegree sym={} v0={} factors={} count=",
        l.sym,
        l.vertex0,
        l.factors
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    let count: usize = header.strip_prefix(&expected_header)?.parse().ok()?;
    let mut basis = Vec::with_capacity(count);
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        basis.push(parse_polynomial(line).ok()?);
    }
    if basis.len() != count || count != invariant_dim(l) {
        return None;
    }
    let index = derive_index(&basis)?;
    Some(InvariantBasis {
        degree: l.clone(),
        basis,
        index,
    })
}

fn store_to_disk(b: &InvariantBasis) {
    if let Some(path) = cache_path(&b.degree) {
        store_to_path(b, &path);
    }
}

fn store_to_path(b: &InvariantBasis, path: &std::path::Path) {
    let Some(dir) = path.parent() else { return };
    if std::fs::create_dir_all(dir).is_err() {
        return;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let write = || -> std::io::Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(&tmp)?);
        writeln!(
            f,
            "multidegree sym={} v0={} factors={} count={}",
            b.degree.sym,
            b.degree.vertex0,
            b.degree
                .factors
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(","),
            b.basis.len()
        )?;
        for p in &b.basis {
            writeln!(f, "{p}")?;
        }
        f.flush()
    };
    if write().is_ok() {
        // atomic publish; concurrent writers race benignly because the
        // contents are deterministic
        let _ = std::fs::rename(&tmp, path);
    } else {
        let _ = std::fs::remove_file(&tmp);
    }
}

/// The invariant basis of a multidegree, memoized in memory and on disk.
pub fn invariant_basis(l: &Multidegree) -> Arc<InvariantBasis> {
    if let Some(b) = memo().lock().unwrap().get(l) {
        return b.clone();
    }
    let fresh = load_from_disk(l).unwrap_or_else(|| {
        let b = compute_basis(l);
        store_to_disk(&b);
        b
    });
    let arc = Arc::new(fresh);
    memo()
        .lock()
        .unwrap()
        .entry(l.clone())
        .or_insert_with(|| arc.clone())
        .clone()
}

/// (number of cached files, total bytes) in the disk cache.
pub fn disk_cache_stats() -> Result<(usize, u64)> {
    let Some(dir) = cache_dir() else {
        return Ok((0, 0));
    };
    let mut files = 0usize;
    let mut bytes = 0u64;
    match std::fs::read_dir(&dir) {
        Ok(entries) => {
            for entry in entries {
                let entry = entry?;
                if entry.file_name().to_string_lossy().starts_with("inv-") {
                    files += 1;
                    bytes += entry.metadata()?.len();
                }
            }
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
        Err(e) => return Err(e.into()),
    }
    Ok((files, bytes))
}

/// Removes all cached basis files.
pub fn disk_cache_clear() -> Result<usize> {
    let Some(dir) = cache_dir() else {
        return Ok(0);
    };
    let mut removed = 0usize;
    match std::fs::read_dir(&dir) {
        Ok(entries) => {
            for entry in entries {
                let entry = entry?;
                if entry.file_name().to_string_lossy().starts_with("inv-") {
                    std::fs::remove_file(entry.path())?;
                    removed += 1;
                }
            }
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
        Err(e) => return Err(e.into()),
    }
    Ok(removed)
}
