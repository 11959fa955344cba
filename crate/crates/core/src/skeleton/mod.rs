//! Abstract simplicial complexes and the skeleton constructions used when
//! cutting a manifold along a low-dimensional skeleton.
//!
//! A complex is stored by its maximal simplices as sorted vertex-index
//! tuples; all other faces are derived on demand. Vertex indices follow a
//! fixed total order, which is what makes prism diagonals deterministic.

mod library;
mod text;

pub use library::{boundary_of_simplex, icosahedron, library, octahedron, single_simplex, torus_3x3};
pub use text::{parse_complex, write_complex};

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeletonError {
    #[error("range error: {0}")]
    Range(String),
    #[error("purity error: {0}")]
    Purity(String),
    #[error("invalid complex: {0}")]
    Invalid(String),
    #[error("{line}:{col}: {message}")]
    Parse { line: usize, col: usize, message: String },
}

impl SkeletonError {
    pub fn name(&self) -> &'static str {
        match self {
            SkeletonError::Range(_) => "RangeError",
            SkeletonError::Purity(_) => "PurityError",
            SkeletonError::Invalid(_) => "InvalidComplex",
            SkeletonError::Parse { .. } => "ParseError",
        }
    }
}

pub type Simplex = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    maximal: Vec<Simplex>,
    dim: usize,
    pure: bool,
}

/// Orders labels with embedded integers compared numerically, so `v2 < v10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for ((da, sa), (db, sb)) in ca.iter().zip(cb.iter()) {
        let ord = if *da && *db {
            let (ta, tb) = (sa.trim_start_matches('0'), sb.trim_start_matches('0'));
            ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb)).then_with(|| sa.len().cmp(&sb.len()))
        } else {
            sa.cmp(sb)
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|v| it.any(|w| w == v))
}

/// All nonempty faces of a sorted simplex.
fn faces_of(s: &[usize]) -> impl Iterator<Item = Simplex> + '_ {
    (1u64..(1u64 << s.len())).map(move |mask| s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| *v).collect())
}

impl SimplicialComplex {
    /// Builds a complex from labelled simplices. Vertex order is the natural
    /// order of the labels; simplices contained in others are dropped.
    pub fn from_labelled(simplices: &[Vec<String>]) -> Result<Self, SkeletonError> {
        let mut labels: Vec<String> = simplices.iter().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        labels.sort_by(|a, b| natural_cmp(a, b));
        let index: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let tuples: Vec<Simplex> = simplices.iter().map(|s| s.iter().map(|l| index[l.as_str()]).collect()).collect();
        Self::from_indexed(labels, tuples)
    }

    /// Builds a complex on the given vertex order. Every label must be used.
    pub fn from_indexed(labels: Vec<String>, simplices: Vec<Simplex>) -> Result<Self, SkeletonError> {
        if labels.iter().collect::<BTreeSet<_>>().len() != labels.len() {
            return Err(SkeletonError::Invalid("duplicate vertex label".into()));
        }
        let mut cells: BTreeSet<Simplex> = BTreeSet::new();
        for s in simplices {
            let mut t = s.clone();
            t.sort_unstable();
            t.dedup();
            if t.len() != s.len() {
                return Err(SkeletonError::Invalid(format!("repeated vertex in simplex {s:?}")));
            }
            if t.is_empty() {
                return Err(SkeletonError::Invalid("empty simplex".into()));
            }
            if let Some(v) = t.iter().find(|v| **v >= labels.len()) {
                return Err(SkeletonError::Invalid(format!("vertex index {v} out of range")));
            }
            cells.insert(t);
        }
        if cells.is_empty() {
            return Err(SkeletonError::Invalid("no simplices".into()));
        }
        let all: Vec<Simplex> = cells.into_iter().collect();
        let maximal: Vec<Simplex> = all
            .iter()
            .filter(|s| !all.iter().any(|t| t.len() > s.len() && is_subset(s, t)))
            .cloned()
            .collect();
        let used: BTreeSet<usize> = maximal.iter().flatten().copied().collect();
        if used.len() != labels.len() {
            return Err(SkeletonError::Invalid("a vertex label is not used by any simplex".into()));
        }
        let dim = maximal.iter().map(|s| s.len() - 1).max().unwrap_or(0);
        let pure = maximal.iter().all(|s| s.len() == dim + 1);
        Ok(SimplicialComplex { labels, maximal, dim, pure })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn maximal(&self) -> &[Simplex] {
        &self.maximal
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn faces(&self) -> BTreeSet<Simplex> {
        self.maximal.iter().flat_map(|s| faces_of(s)).collect()
    }

    pub fn faces_of_dim(&self, d: usize) -> BTreeSet<Simplex> {
        self.faces().into_iter().filter(|f| f.len() == d + 1).collect()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.maximal.iter().any(|m| is_subset(s, m))
    }

    /// Face counts f_0, ..., f_n.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim + 1];
        for s in self.faces() {
            f[s.len() - 1] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(i, c)| if i % 2 == 0 { *c as i64 } else { -(*c as i64) }).sum()
    }

    /// True when every codimension-one face lies in exactly two top cells.
    pub fn is_closed_pseudomanifold(&self) -> bool {
        if !self.pure || self.dim == 0 {
            return false;
        }
        let mut count: BTreeMap<Simplex, usize> = BTreeMap::new();
        for s in &self.maximal {
            for i in 0..s.len() {
                let mut f = s.clone();
                f.remove(i);
                *count.entry(f).or_default() += 1;
            }
        }
        count.values().all(|c| *c == 2)
    }

    pub fn simplex_labels(&self, s: &[usize]) -> Vec<&str> {
        s.iter().map(|v| self.labels[*v].as_str()).collect()
    }

    fn require_pure(&self) -> Result<(), SkeletonError> {
        if self.pure {
            Ok(())
        } else {
            Err(SkeletonError::Purity(format!("complex has maximal simplices of several dimensions (top {})", self.dim)))
        }
    }
}

/// A closed set of faces of an owning complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcomplexSelection {
    pub owner: SimplicialComplex,
    pub simplices: BTreeSet<Simplex>,
}

impl SubcomplexSelection {
    pub fn new(owner: &SimplicialComplex, simplices: BTreeSet<Simplex>) -> Result<Self, SkeletonError> {
        if let Some(s) = simplices.iter().find(|s| !owner.contains(s)) {
            return Err(SkeletonError::Invalid(format!("{s:?} is not a face of the owner")));
        }
        Ok(SubcomplexSelection { owner: owner.clone(), simplices })
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.simplices.iter().flatten().copied().collect()
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    pub fn count_of_dim(&self, d: usize) -> usize {
        self.simplices.iter().filter(|s| s.len() == d + 1).count()
    }

    pub fn is_closed(&self) -> bool {
        self.simplices.iter().all(|s| faces_of(s).all(|f| self.simplices.contains(&f)))
    }

    /// Two closed selections of one complex meet iff they share a vertex.
    pub fn is_disjoint_from(&self, other: &SubcomplexSelection) -> bool {
        self.vertices().is_disjoint(&other.vertices())
    }

    /// Face-by-face check that no face lies in both selections.
    pub fn shares_no_face_with(&self, other: &SubcomplexSelection) -> bool {
        self.simplices.is_disjoint(&other.simplices)
    }
}

/// The barycentric subdivision with its barycenter tagging.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    /// For each new vertex, the face of the original complex it is the barycenter of.
    pub barycenter_of: Vec<Simplex>,
}

impl Subdivision {
    /// The new vertex sitting at the barycenter of `face`.
    pub fn vertex_of(&self, face: &[usize]) -> Option<usize> {
        self.barycenter_of.binary_search_by(|f| face_order(f, face)).ok()
    }

    /// The image of a selection of the original complex: all chains whose
    /// largest face is selected.
    pub fn embed(&self, sel: &SubcomplexSelection) -> SubcomplexSelection {
        let simplices = self
            .complex
            .faces()
            .into_iter()
            .filter(|chain| {
                let top = chain.iter().map(|v| &self.barycenter_of[*v]).max_by_key(|f| f.len()).unwrap();
                sel.simplices.contains(top)
            })
            .collect();
        SubcomplexSelection { owner: self.complex.clone(), simplices }
    }

    /// Chains whose vertices all sit at barycenters satisfying `keep`.
    fn select_vertices(&self, keep: impl Fn(&Simplex) -> bool) -> SubcomplexSelection {
        let simplices = self
            .complex
            .faces()
            .into_iter()
            .filter(|chain| chain.iter().all(|v| keep(&self.barycenter_of[*v])))
            .collect();
        SubcomplexSelection { owner: self.complex.clone(), simplices }
    }
}

/// Faces ordered by dimension, then lexicographically.
fn face_order(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn barycenter_label(k: &SimplicialComplex, face: &[usize]) -> String {
    format!("<{}>", k.simplex_labels(face).join(","))
}

pub fn barycentric_subdivision(k: &SimplicialComplex) -> Subdivision {
    let mut faces: Vec<Simplex> = k.faces().into_iter().collect();
    faces.sort_by(|a, b| face_order(a, b));
    let index: BTreeMap<&Simplex, usize> = faces.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut cells = Vec::new();
    for top in k.maximal() {
        // A maximal chain is a vertex ordering: F_i is the first i+1 vertices.
        let mut perm: Vec<usize> = top.clone();
        loop {
            let chain: Simplex = (1..=perm.len())
                .map(|i| {
                    let mut f = perm[..i].to_vec();
                    f.sort_unstable();
                    index[&f]
                })
                .collect();
            cells.push(chain);
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    let labels = faces.iter().map(|f| barycenter_label(k, f)).collect();
    let complex = SimplicialComplex::from_indexed(labels, cells).expect("subdivision of a valid complex");
    Subdivision { complex, barycenter_of: faces }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All faces of dimension at most `d`.
pub fn relative_skeleton(k: &SimplicialComplex, d: usize) -> Result<SubcomplexSelection, SkeletonError> {
    if d > k.dim() {
        return Err(SkeletonError::Range(format!("skeleton dimension {d} exceeds complex dimension {}", k.dim())));
    }
    let simplices = k.faces().into_iter().filter(|f| f.len() <= d + 1).collect();
    Ok(SubcomplexSelection { owner: k.clone(), simplices })
}

/// Faces of dimension below `d`, plus the `d`-faces not lying wholly inside `ends`.
pub fn relative_skeleton_rel(
    k: &SimplicialComplex,
    d: usize,
    ends: &SubcomplexSelection,
) -> Result<SubcomplexSelection, SkeletonError> {
    if d > k.dim() {
        return Err(SkeletonError::Range(format!("skeleton dimension {d} exceeds complex dimension {}", k.dim())));
    }
    let simplices =
        k.faces().into_iter().filter(|f| f.len() <= d || (f.len() == d + 1 && !ends.simplices.contains(f))).collect();
    Ok(SubcomplexSelection { owner: k.clone(), simplices })
}

fn check_codim(k: &SimplicialComplex, d: usize) -> Result<(), SkeletonError> {
    k.require_pure()?;
    if d == 0 || d > k.dim() {
        return Err(SkeletonError::Range(format!("codimension parameter {d} outside 1..={}", k.dim())));
    }
    Ok(())
}

/// The (d-1)-skeleton of the dual cell decomposition, inside the subdivision:
/// chains built only from barycenters of faces of dimension at least n-d+1.
pub fn dual_skeleton(k: &SimplicialComplex, sd: &Subdivision, d: usize) -> Result<SubcomplexSelection, SkeletonError> {
    check_codim(k, d)?;
    let n = k.dim();
    Ok(sd.select_vertices(|f| f.len() > n + 1 - d))
}

/// The dual skeleton relative to `ends`: also admits barycenters of end faces
/// of dimension exactly n-d, so that it restricts to the dual skeleton of
/// each end.
pub fn relative_dual_skeleton(
    k: &SimplicialComplex,
    sd: &Subdivision,
    d: usize,
    ends: &SubcomplexSelection,
) -> Result<SubcomplexSelection, SkeletonError> {
    check_codim(k, d)?;
    let n = k.dim();
    Ok(sd.select_vertices(|f| f.len() > n + 1 - d || (f.len() == n + 1 - d && ends.simplices.contains(f))))
}

/// A cell of the dual decomposition: the union of chains starting at `face`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCell {
    pub face: Simplex,
    pub dim: usize,
    /// Top-dimensional chains of the subdivision making up the cell.
    pub pieces: Vec<Simplex>,
}

/// Dual cells of dimension at most d-1, one per face of dimension at least n-d+1.
pub fn dual_cells(k: &SimplicialComplex, sd: &Subdivision, d: usize) -> Result<Vec<DualCell>, SkeletonError> {
    check_codim(k, d)?;
    let n = k.dim();
    let mut cells: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
    for chain in sd.complex.faces() {
        let faces: Vec<&Simplex> = chain.iter().map(|v| &sd.barycenter_of[*v]).collect();
        let bottom = faces.iter().min_by_key(|f| f.len()).unwrap();
        let top = faces.iter().max_by_key(|f| f.len()).unwrap();
        // Chains from the bottom face up to a top cell of k span the dual cell.
        if top.len() == n + 1 && chain.len() == n + 2 - bottom.len() && bottom.len() > n + 1 - d {
            cells.entry((*bottom).clone()).or_default().push(chain);
        }
    }
    let mut out: Vec<DualCell> =
        cells.into_iter().map(|(face, pieces)| DualCell { dim: n + 1 - face.len(), face, pieces }).collect();
    out.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| face_order(&a.face, &b.face)));
    Ok(out)
}

/// Checks the combinatorial retraction: every face of the subdivision outside
/// `y` has a vertex in `c`.
pub fn retracts_onto(sd: &Subdivision, y: &SubcomplexSelection, c: &SubcomplexSelection) -> bool {
    let cv = c.vertices();
    sd.complex.faces().iter().filter(|s| !y.simplices.contains(*s)).all(|s| s.iter().any(|v| cv.contains(v)))
}

/// A triangulation of k × [0,1] with both end copies marked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prism {
    pub complex: SimplicialComplex,
    pub end0: SubcomplexSelection,
    pub end1: SubcomplexSelection,
}

impl Prism {
    pub fn ends(&self) -> SubcomplexSelection {
        let simplices = self.end0.simplices.union(&self.end1.simplices).cloned().collect();
        SubcomplexSelection { owner: self.complex.clone(), simplices }
    }

    /// The end copy as a complex in its own right, with the `@0`/`@1` tag removed.
    pub fn end_complex(&self, end: usize) -> SimplicialComplex {
        let sel = if end == 0 { &self.end0 } else { &self.end1 };
        let tops: Vec<Vec<String>> = sel
            .simplices
            .iter()
            .map(|s| s.iter().map(|v| self.complex.label(*v).rsplit_once('@').unwrap().0.to_string()).collect())
            .collect();
        SimplicialComplex::from_labelled(&tops).expect("end copy is a complex")
    }
}

/// Staircase decomposition: vertex v becomes v@0 (index 2v) and v@1 (index
/// 2v+1); a simplex (v_0 < ... < v_n) yields the n+1 simplices
/// (v_0@0, ..., v_j@0, v_j@1, ..., v_n@1).
pub fn prism_triangulation(k: &SimplicialComplex) -> Result<Prism, SkeletonError> {
    k.require_pure()?;
    let labels: Vec<String> = k.labels().iter().flat_map(|l| [format!("{l}@0"), format!("{l}@1")]).collect();
    let mut cells = Vec::new();
    for s in k.maximal() {
        for j in 0..s.len() {
            let mut cell: Simplex = s[..=j].iter().map(|v| 2 * v).collect();
            cell.extend(s[j..].iter().map(|v| 2 * v + 1));
            cells.push(cell);
        }
    }
    let complex = SimplicialComplex::from_indexed(labels, cells)?;
    let end = |parity: usize| {
        let simplices = complex.faces().into_iter().filter(|f| f.iter().all(|v| v % 2 == parity)).collect();
        SubcomplexSelection { owner: complex.clone(), simplices }
    };
    let (end0, end1) = (end(0), end(1));
    Ok(Prism { complex, end0, end1 })
}
