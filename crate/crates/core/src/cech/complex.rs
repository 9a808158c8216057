use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::CechError;
use crate::IntMatrix;

/// Finite abstract simplicial complex given by its maximal simplices.
///
/// Every vertex `0..vertex_count` is a 0-simplex, so isolated vertices are
/// allowed. Faces are enumerated once at construction, sorted
/// lexicographically within each dimension; that order fixes the cochain
/// bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    maximal: Vec<Vec<usize>>,
    faces: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    pub fn new(vertex_count: usize, simplices: Vec<Vec<usize>>) -> Result<Self, CechError> {
        for s in &simplices {
            if s.is_empty() {
                return Err(CechError::MalformedComplex("empty simplex".into()));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(CechError::MalformedComplex(format!(
                    "simplex {s:?} is not strictly increasing"
                )));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= vertex_count) {
                return Err(CechError::MalformedComplex(format!(
                    "vertex {v} out of range for {vertex_count} vertices"
                )));
            }
        }
        let mut closure: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        let push = |face: Vec<usize>, closure: &mut Vec<BTreeSet<Vec<usize>>>| {
            let d = face.len() - 1;
            if closure.len() <= d {
                closure.resize(d + 1, BTreeSet::new());
            }
            closure[d].insert(face);
        };
        for v in 0..vertex_count {
            push(vec![v], &mut closure);
        }
        for s in &simplices {
            let n = s.len();
            for mask in 1u64..(1u64 << n) {
                let face: Vec<usize> = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| s[i])
                    .collect();
                push(face, &mut closure);
            }
        }
        let faces: Vec<Vec<Vec<usize>>> = closure
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect();
        let maximal = maximal_faces(&faces);
        Ok(SimplicialComplex {
            vertex_count,
            maximal,
            faces,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn maximal_simplices(&self) -> &[Vec<usize>] {
        &self.maximal
    }

    /// Highest simplex dimension, or `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.faces.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn simplex_index(&self, k: usize, simplex: &[usize]) -> Option<usize> {
        self.simplices(k)
            .binary_search_by(|s| s.as_slice().cmp(simplex))
            .ok()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        !simplex.is_empty() && self.simplex_index(simplex.len() - 1, simplex).is_some()
    }

    /// Coboundary `C^k -> C^{k+1}`, rows indexed by (k+1)-simplices.
    pub fn coboundary(&self, k: usize) -> IntMatrix {
        let src = self.simplices(k);
        let dst = self.simplices(k + 1);
        let mut d = IntMatrix::zeros(dst.len(), src.len());
        for (r, s) in dst.iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let c = self
                    .simplex_index(k, &face)
                    .expect("faces of a simplex belong to the complex");
                d[(r, c)] = BigInt::from(if i % 2 == 0 { 1 } else { -1 });
            }
        }
        d
    }

    /// Coboundary `C^{k-1} -> C^k`; the zero map from the trivial group when `k = 0`.
    pub fn incoming_coboundary(&self, k: usize) -> IntMatrix {
        match k.checked_sub(1) {
            Some(j) => self.coboundary(j),
            None => IntMatrix::zeros(self.simplices(0).len(), 0),
        }
    }

    pub fn connected_components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for e in self.simplices(1) {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..self.vertex_count)
            .filter(|&v| find(&mut parent, v) == v)
            .count()
    }

    /// Disjoint union with vertices of later parts shifted past earlier ones.
    pub fn disjoint_union(parts: &[SimplicialComplex]) -> Self {
        let mut offset = 0;
        let mut simplices = Vec::new();
        for p in parts {
            for s in &p.maximal {
                simplices.push(s.iter().map(|v| v + offset).collect());
            }
            offset += p.vertex_count;
        }
        SimplicialComplex::new(offset, simplices).expect("shifted simplices stay valid")
    }

    pub fn point() -> Self {
        SimplicialComplex::new(1, vec![]).expect("valid")
    }

    pub fn interval() -> Self {
        SimplicialComplex::new(2, vec![vec![0, 1]]).expect("valid")
    }

    /// Boundary of an `n`-gon, `n >= 3`.
    pub fn polygon(n: usize) -> Result<Self, CechError> {
        if n < 3 {
            return Err(CechError::MalformedComplex(format!(
                "polygon with {n} sides"
            )));
        }
        let edges = (0..n)
            .map(|i| {
                let (a, b) = (i, (i + 1) % n);
                vec![a.min(b), a.max(b)]
            })
            .collect();
        SimplicialComplex::new(n, edges)
    }

    pub fn circle() -> Self {
        Self::polygon(3).expect("triangle is a polygon")
    }

    /// Boundary of the standard `(k+1)`-simplex.
    pub fn sphere(k: usize) -> Self {
        let n = k + 2;
        let simplices = (0..n)
            .map(|skip| (0..n).filter(|&v| v != skip).collect())
            .collect();
        SimplicialComplex::new(n, simplices).expect("valid")
    }
}

fn maximal_faces(faces: &[Vec<Vec<usize>>]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for (d, layer) in faces.iter().enumerate() {
        for s in layer {
            let covered = faces.get(d + 1).is_some_and(|up| {
                up.iter()
                    .any(|t| s.iter().all(|v| t.binary_search(v).is_ok()))
            });
            if !covered {
                out.push(s.clone());
            }
        }
    }
    out
}

/// Vertex map that sends every simplex of `source` onto a simplex of `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    source: SimplicialComplex,
    target: SimplicialComplex,
    vertex_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(
        source: SimplicialComplex,
        target: SimplicialComplex,
        vertex_map: Vec<usize>,
    ) -> Result<Self, CechError> {
        if vertex_map.len() != source.vertex_count() {
            return Err(CechError::NotSimplicial(format!(
                "vertex map has {} entries for {} vertices",
                vertex_map.len(),
                source.vertex_count()
            )));
        }
        if let Some(&v) = vertex_map.iter().find(|&&v| v >= target.vertex_count()) {
            return Err(CechError::NotSimplicial(format!(
                "image vertex {v} out of range"
            )));
        }
        for s in source.maximal_simplices() {
            let img: BTreeSet<usize> = s.iter().map(|&v| vertex_map[v]).collect();
            let img: Vec<usize> = img.into_iter().collect();
            if !target.contains(&img) {
                return Err(CechError::NotSimplicial(format!(
                    "simplex {s:?} maps to {img:?}, which is not a simplex of the target"
                )));
            }
        }
        Ok(SimplicialMap {
            source,
            target,
            vertex_map,
        })
    }

    pub fn identity(k: &SimplicialComplex) -> Self {
        SimplicialMap {
            source: k.clone(),
            target: k.clone(),
            vertex_map: (0..k.vertex_count()).collect(),
        }
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMap) -> Result<SimplicialMap, CechError> {
        if self.target != other.source {
            return Err(CechError::NotSimplicial("maps are not composable".into()));
        }
        let vm = self
            .vertex_map
            .iter()
            .map(|&v| other.vertex_map[v])
            .collect();
        SimplicialMap::new(self.source.clone(), other.target.clone(), vm)
    }

    /// Cochain pullback `C^k(target) -> C^k(source)`.
    pub fn cochain_pullback(&self, k: usize) -> IntMatrix {
        let src = self.source.simplices(k);
        let mut m = IntMatrix::zeros(src.len(), self.target.simplices(k).len());
        for (r, s) in src.iter().enumerate() {
            let mut img: Vec<usize> = s.iter().map(|&v| self.vertex_map[v]).collect();
            let sign = sort_with_parity(&mut img);
            if img.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let c = self
                .target
                .simplex_index(k, &img)
                .expect("simplicial map images are simplices");
            m[(r, c)] = BigInt::from(sign);
        }
        m
    }
}

/// Sorts in place, returning the sign of the sorting permutation.
fn sort_with_parity(v: &mut [usize]) -> i64 {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}
