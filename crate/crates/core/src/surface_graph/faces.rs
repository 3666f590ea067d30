//! Flags, face tracing, Euler genus and duality.
//!
//! A flag is a triple (edge, end, side) with index `4 * edge + 2 * end + side`.
//! Side 1 of an end is the corner towards the rotation successor, side 0 the
//! corner towards the predecessor. Three fixed-point-free involutions act on
//! flags:
//!
//! - `s0` crosses the edge to its other end (keeping the side for a `+1`
//!   edge as seen from a consistent orientation, swapping it for `-1`),
//! - `s1` moves to the neighbouring end around the vertex,
//! - `s2` switches to the other side of the same end.
//!
//! Vertices, edges and faces are the orbits of `<s1,s2>`, `<s0,s2>` and
//! `<s0,s1>`. Swapping `s0` and `s2` yields the dual map.

use super::embedding::{EdgeEnd, EdgeId, Embedding, Sign, VertexId};

pub(crate) fn flag(edge: EdgeId, end: u8, side: u8) -> usize {
    4 * edge + 2 * end as usize + side as usize
}

fn flag_end(f: usize) -> EdgeEnd {
    EdgeEnd::new(f / 4, ((f / 2) % 2) as u8)
}

/// The three flag involutions of an embedded graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagMap {
    pub(crate) s0: Vec<usize>,
    pub(crate) s1: Vec<usize>,
    pub(crate) s2: Vec<usize>,
}

impl FlagMap {
    pub fn len(&self) -> usize {
        self.s0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s0.is_empty()
    }

    fn dual(&self) -> FlagMap {
        FlagMap { s0: self.s2.clone(), s1: self.s1.clone(), s2: self.s0.clone() }
    }
}

impl Embedding {
    pub fn flag_map(&self) -> FlagMap {
        let m = self.num_edges();
        let mut s0 = vec![0; 4 * m];
        let mut s1 = vec![0; 4 * m];
        let mut s2 = vec![0; 4 * m];
        for e in 0..m {
            for end in 0..2u8 {
                let h = EdgeEnd::new(e, end);
                let next = self.next_end(h);
                let prev = self.prev_end(h);
                for side in 0..2u8 {
                    let f = flag(e, end, side);
                    s2[f] = flag(e, end, side ^ 1);
                    s0[f] = match self.signature(e) {
                        Sign::Plus => flag(e, end ^ 1, side ^ 1),
                        Sign::Minus => flag(e, end ^ 1, side),
                    };
                    s1[f] = if side == 1 {
                        flag(next.edge, next.end, 0)
                    } else {
                        flag(prev.edge, prev.end, 1)
                    };
                }
            }
        }
        FlagMap { s0, s1, s2 }
    }

    /// Traces every face boundary walk.
    pub fn faces(&self) -> FaceSet {
        trace_faces(&self.flag_map())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.euler_characteristic_with(&self.faces())
    }

    pub fn euler_characteristic_with(&self, faces: &FaceSet) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + faces.len() as i64
    }

    /// `2 - chi` of the embedding surface.
    pub fn euler_genus(&self) -> usize {
        let eg = 2 - self.euler_characteristic();
        debug_assert!(eg >= 0, "cellular embeddings have chi <= 2");
        eg as usize
    }

    /// True when the surface is orientable, i.e. some set of local switches
    /// makes every signature `+1`.
    pub fn is_orientable(&self) -> bool {
        // two-colour vertices so that sign(uv) = -1 iff colours differ
        let n = self.num_vertices();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        colour[0] = Some(false);
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            let cv = colour[v].unwrap();
            for h in self.rotation(v) {
                let w = self.vertex_of(h.opposite());
                let want = cv ^ (self.signature(h.edge) == Sign::Minus);
                match colour[w] {
                    None => {
                        colour[w] = Some(want);
                        stack.push(w);
                    }
                    Some(c) if c != want => return false,
                    Some(_) => {}
                }
            }
        }
        true
    }

    /// The dual embedded graph. Dual vertex `f` is face `f` of
    /// [`Embedding::faces`]; dual edge `e` crosses primal edge `e`.
    pub fn dual(&self) -> DualGraph {
        let map = self.flag_map();
        let faces = trace_faces(&map);
        let embedding = from_flag_map(&map.dual());
        DualGraph { embedding, faces }
    }

    /// Isomorphism of embedded graphs: a bijection of flags commuting with all
    /// three involutions. Vertex and edge labels are ignored.
    pub fn is_isomorphic(&self, other: &Embedding) -> bool {
        if self.num_vertices() != other.num_vertices() || self.num_edges() != other.num_edges() {
            return false;
        }
        if self.num_edges() == 0 {
            return true;
        }
        let a = self.flag_map();
        let b = other.flag_map();
        (0..b.len()).any(|target| extend_isomorphism(&a, &b, target))
    }
}

fn extend_isomorphism(a: &FlagMap, b: &FlagMap, target: usize) -> bool {
    let n = a.len();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    image[0] = target;
    used[target] = true;
    let mut stack = vec![0];
    while let Some(f) = stack.pop() {
        let g = image[f];
        for (sa, sb) in [(&a.s0, &b.s0), (&a.s1, &b.s1), (&a.s2, &b.s2)] {
            let (fa, gb) = (sa[f], sb[g]);
            if image[fa] == usize::MAX {
                if used[gb] {
                    return false;
                }
                image[fa] = gb;
                used[gb] = true;
                stack.push(fa);
            } else if image[fa] != gb {
                return false;
            }
        }
    }
    image.iter().all(|&g| g != usize::MAX)
}

/// Rebuilds a signed rotation system from flag involutions whose edge orbits
/// are the aligned blocks `4e..4e+4`. End 0 of edge `e` is the `s2`-pair of
/// flag `4e`; vertices are numbered by their smallest flag.
pub(crate) fn from_flag_map(map: &FlagMap) -> Embedding {
    let nf = map.len();
    let m = nf / 4;
    if m == 0 {
        return Embedding::new(vec![Vec::new()], Vec::new()).expect("single vertex");
    }
    let end_of = |f: usize| -> EdgeEnd {
        let e = f / 4;
        let base = 4 * e;
        if f == base || f == map.s2[base] {
            EdgeEnd::new(e, 0)
        } else {
            EdgeEnd::new(e, 1)
        }
    };
    let mut seen = vec![false; nf];
    let mut positive = vec![false; nf];
    let mut rotation = Vec::new();
    for start in 0..nf {
        if seen[start] {
            continue;
        }
        let mut rot = Vec::new();
        let mut cur = start;
        loop {
            positive[cur] = true;
            seen[cur] = true;
            let neg = map.s1[cur];
            seen[neg] = true;
            rot.push(end_of(cur));
            cur = map.s2[neg];
            if cur == start {
                break;
            }
        }
        rotation.push(rot);
    }
    let signature = (0..m)
        .map(|e| {
            let base = 4 * e;
            let p = if positive[base] { base } else { map.s2[base] };
            if positive[map.s0[p]] {
                Sign::Minus
            } else {
                Sign::Plus
            }
        })
        .collect();
    Embedding::new(rotation, signature).expect("flag map describes a connected map")
}

/// A face boundary walk: the edge-ends from which successive boundary edges
/// are traversed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub boundary: Vec<EdgeEnd>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSet {
    faces: Vec<Face>,
    face_of_flag: Vec<usize>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    /// Face on side `side` of edge `e`.
    pub fn face_beside(&self, e: EdgeId, side: u8) -> usize {
        self.face_of_flag[flag(e, 0, side)]
    }

    /// Total number of boundary incidences; equals twice the edge count.
    pub fn total_boundary(&self) -> usize {
        self.faces.iter().map(Face::len).sum()
    }
}

/// Faces are the orbits of `<s0, s1>`; each orbit of `2L` flags is a
/// boundary walk of length `L`. Orbits are discovered from the lowest
/// unvisited flag.
pub(crate) fn trace_faces(map: &FlagMap) -> FaceSet {
    let nf = map.len();
    if nf == 0 {
        return FaceSet { faces: vec![Face { boundary: Vec::new() }], face_of_flag: Vec::new() };
    }
    let mut face_of_flag = vec![usize::MAX; nf];
    let mut faces = Vec::new();
    for start in 0..nf {
        if face_of_flag[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut boundary = Vec::new();
        let mut cur = start;
        loop {
            face_of_flag[cur] = id;
            boundary.push(flag_end(cur));
            let across = map.s0[cur];
            face_of_flag[across] = id;
            cur = map.s1[across];
            if cur == start {
                break;
            }
        }
        faces.push(Face { boundary });
    }
    FaceSet { faces, face_of_flag }
}

/// Dual of an embedded graph, with the primal faces it was built from.
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub embedding: Embedding,
    pub faces: FaceSet,
}

impl DualGraph {
    /// Dual vertex of face `f`.
    pub fn vertex_of_face(&self, f: usize) -> VertexId {
        f
    }

    pub fn degree(&self, f: usize) -> usize {
        self.embedding.degree(f)
    }
}
