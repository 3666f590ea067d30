use std::collections::VecDeque;

use super::GraphError;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type ArcId = usize;

/// One of the two ends of an undirected edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeEnd {
    pub edge: EdgeId,
    pub end: u8,
}

impl EdgeEnd {
    pub fn new(edge: EdgeId, end: u8) -> Self {
        debug_assert!(end < 2);
        Self { edge, end }
    }

    pub fn opposite(self) -> Self {
        Self { edge: self.edge, end: self.end ^ 1 }
    }

    /// Dense index `2 * edge + end`.
    pub fn index(self) -> usize {
        2 * self.edge + self.end as usize
    }

    pub fn from_index(index: usize) -> Self {
        Self { edge: index / 2, end: (index % 2) as u8 }
    }
}

impl std::fmt::Display for EdgeEnd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.edge, self.end)
    }
}

/// Edge signature of a signed rotation system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A connected multigraph with a signed rotation system.
///
/// The rotation of a vertex is the cyclic order of the edge-ends incident to
/// it. Together with the edge signatures this encodes a cellular embedding in
/// an orientable or non-orientable surface. Loops and parallel edges are
/// allowed everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    rotation: Vec<Vec<EdgeEnd>>,
    signature: Vec<Sign>,
    endpoints: Vec<[VertexId; 2]>,
    // position of each edge-end (by `EdgeEnd::index`) inside its rotation
    position: Vec<usize>,
}

impl Embedding {
    /// Validates a rotation system: every end of every edge must occur in
    /// exactly one rotation exactly once, and the graph must be connected.
    pub fn new(rotation: Vec<Vec<EdgeEnd>>, signature: Vec<Sign>) -> Result<Self, GraphError> {
        if rotation.is_empty() {
            return Err(GraphError::Empty);
        }
        let m = signature.len();
        let mut owner = vec![usize::MAX; 2 * m];
        let mut position = vec![usize::MAX; 2 * m];
        for (v, rot) in rotation.iter().enumerate() {
            for (p, h) in rot.iter().enumerate() {
                if h.edge >= m || h.end > 1 {
                    return Err(GraphError::MalformedRotation(format!(
                        "vertex {v} lists unknown edge-end {h}"
                    )));
                }
                if owner[h.index()] != usize::MAX {
                    return Err(GraphError::MalformedRotation(format!(
                        "edge-end {h} appears more than once"
                    )));
                }
                owner[h.index()] = v;
                position[h.index()] = p;
            }
        }
        if let Some(i) = owner.iter().position(|&v| v == usize::MAX) {
            return Err(GraphError::MalformedRotation(format!(
                "edge-end {} is missing from every rotation",
                EdgeEnd::from_index(i)
            )));
        }
        let endpoints = (0..m).map(|e| [owner[2 * e], owner[2 * e + 1]]).collect();
        let g = Self { rotation, signature, endpoints, position };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.rotation.len()
    }

    pub fn num_edges(&self) -> usize {
        self.signature.len()
    }

    pub fn rotation(&self, v: VertexId) -> &[EdgeEnd] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<EdgeEnd>] {
        &self.rotation
    }

    pub fn signature(&self, e: EdgeId) -> Sign {
        self.signature[e]
    }

    pub fn signatures(&self) -> &[Sign] {
        &self.signature
    }

    pub fn endpoints(&self, e: EdgeId) -> [VertexId; 2] {
        self.endpoints[e]
    }

    pub fn vertex_of(&self, h: EdgeEnd) -> VertexId {
        self.endpoints[h.edge][h.end as usize]
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        let [u, v] = self.endpoints[e];
        u == v
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v].len()
    }

    pub fn position(&self, h: EdgeEnd) -> usize {
        self.position[h.index()]
    }

    /// Successor of `h` in the rotation at its vertex.
    pub fn next_end(&self, h: EdgeEnd) -> EdgeEnd {
        let rot = &self.rotation[self.vertex_of(h)];
        rot[(self.position(h) + 1) % rot.len()]
    }

    pub fn prev_end(&self, h: EdgeEnd) -> EdgeEnd {
        let rot = &self.rotation[self.vertex_of(h)];
        rot[(self.position(h) + rot.len() - 1) % rot.len()]
    }

    fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for h in &self.rotation[v] {
                let w = self.vertex_of(h.opposite());
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    /// Returns a copy with one extra edge whose end 0 is inserted at index
    /// `at_u.1` of the rotation of `at_u.0` and whose end 1 at index `at_v.1`
    /// of the rotation of `at_v.0`. The new edge gets id `num_edges()`.
    pub fn with_edge(
        &self,
        at_u: (VertexId, usize),
        at_v: (VertexId, usize),
        sign: Sign,
    ) -> Result<Self, GraphError> {
        let e = self.num_edges();
        let mut rotation = self.rotation.clone();
        let mut signature = self.signature.clone();
        signature.push(sign);
        if at_u.0 == at_v.0 {
            // both ends land in the same rotation; insert the later index first
            let rot = &mut rotation[at_u.0];
            let (a, b) = (at_u.1.min(rot.len()), at_v.1.min(rot.len()));
            if a <= b {
                rot.insert(b, EdgeEnd::new(e, 1));
                rot.insert(a, EdgeEnd::new(e, 0));
            } else {
                rot.insert(a, EdgeEnd::new(e, 0));
                rot.insert(b, EdgeEnd::new(e, 1));
            }
        } else {
            let ru = &mut rotation[at_u.0];
            let a = at_u.1.min(ru.len());
            ru.insert(a, EdgeEnd::new(e, 0));
            let rv = &mut rotation[at_v.0];
            let b = at_v.1.min(rv.len());
            rv.insert(b, EdgeEnd::new(e, 1));
        }
        Self::new(rotation, signature)
    }

    /// Same rotations with the signature of `e` replaced.
    pub fn with_signature(&self, e: EdgeId, sign: Sign) -> Self {
        let mut g = self.clone();
        g.signature[e] = sign;
        g
    }

    /// Local switch at `v`: reverse its rotation and flip the signature of
    /// every non-loop edge at `v`. The embedded surface is unchanged.
    pub fn switched(&self, v: VertexId) -> Self {
        let mut rotation = self.rotation.clone();
        let mut signature = self.signature.clone();
        rotation[v].reverse();
        for h in &self.rotation[v] {
            if !self.is_loop(h.edge) {
                signature[h.edge] = signature[h.edge].flip();
            }
        }
        Self::new(rotation, signature).expect("switching preserves validity")
    }
}
