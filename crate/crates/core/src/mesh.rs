//! Structured quadrilateral meshes of the unit square, optionally cut by a straight
//! horizontal edge crack.
//!
//! The crack is a seam of duplicated nodes: the original grid node belongs to the upper
//! face and a copy appended after the grid nodes belongs to the lower face. The tip node
//! is shared by both faces.

use std::fmt;
use std::io::{self, Write};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MouthEdge {
    Left,
    Right,
}

impl fmt::Display for MouthEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MouthEdge::Left => "left",
            MouthEdge::Right => "right",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrackSpec {
    pub y_line: f64,
    pub mouth_edge: MouthEdge,
    pub tip_x: f64,
}

impl Default for CrackSpec {
    fn default() -> Self {
        CrackSpec {
            y_line: 0.5,
            mouth_edge: MouthEdge::Left,
            tip_x: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryTag {
    /// Γ1, `y = 0`.
    Bottom,
    /// Γ2, `x = 1`.
    Right,
    /// Γ3, `y = 1`.
    Top,
    /// Γ4, `x = 0`.
    Left,
    /// Γc seen from the elements above the crack.
    CrackUpper,
    /// Γc seen from the elements below the crack.
    CrackLower,
}

impl BoundaryTag {
    pub const ALL: [BoundaryTag; 6] = [
        BoundaryTag::Bottom,
        BoundaryTag::Right,
        BoundaryTag::Top,
        BoundaryTag::Left,
        BoundaryTag::CrackUpper,
        BoundaryTag::CrackLower,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            BoundaryTag::Bottom => "GAMMA1_BOTTOM",
            BoundaryTag::Right => "GAMMA2_RIGHT",
            BoundaryTag::Top => "GAMMA3_TOP",
            BoundaryTag::Left => "GAMMA4_LEFT",
            BoundaryTag::CrackUpper => "GAMMAC_UPPER",
            BoundaryTag::CrackLower => "GAMMAC_LOWER",
        }
    }
}

/// One element edge on the boundary of the cut domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFacet {
    pub nodes: [usize; 2],
    pub element: usize,
    /// Local edge `k` joins local vertices `k` and `(k + 1) % 4`.
    pub local_edge: usize,
    pub tag: BoundaryTag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrackedMesh {
    nx: usize,
    ny: usize,
    crack: Option<CrackSpec>,
    pub nodes: Vec<[f64; 2]>,
    /// Counterclockwise vertex ids, starting at the lower-left corner.
    pub elements: Vec<[usize; 4]>,
    pub facets: Vec<BoundaryFacet>,
    pub tip_node: Option<usize>,
    /// `(upper, lower)` node pairs along the crack, ordered from mouth to tip.
    pub face_pairs: Vec<(usize, usize)>,
}

fn grid_index(value: f64, divisions: usize, what: &str) -> Result<usize> {
    let scaled = value * divisions as f64;
    let rounded = scaled.round();
    if (scaled - rounded).abs() > 1e-9 {
        return Err(Error::MisalignedCrack(format!(
            "{what} = {value} is not a multiple of 1/{divisions}"
        )));
    }
    Ok(rounded as usize)
}

/// Uncracked `nx × ny` grid of the unit square.
pub fn build_grid(nx: usize, ny: usize) -> Result<CrackedMesh> {
    build_mesh(nx, ny, None)
}

pub fn build_cracked_grid(nx: usize, ny: usize, crack: CrackSpec) -> Result<CrackedMesh> {
    build_mesh(nx, ny, Some(crack))
}

pub fn build_mesh(nx: usize, ny: usize, crack: Option<CrackSpec>) -> Result<CrackedMesh> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2×2 cells, got {nx}×{ny}"
        )));
    }
    let node_id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push([i as f64 / nx as f64, j as f64 / ny as f64]);
        }
    }
    let mut elements = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            elements.push([
                node_id(i, j),
                node_id(i + 1, j),
                node_id(i + 1, j + 1),
                node_id(i, j + 1),
            ]);
        }
    }
    let mut facets = Vec::new();
    let mut push_facet = |elements: &[[usize; 4]], e: usize, k: usize, tag| {
        let v = elements[e];
        facets.push(BoundaryFacet {
            nodes: [v[k], v[(k + 1) % 4]],
            element: e,
            local_edge: k,
            tag,
        });
    };

    let mut tip_node = None;
    let mut face_pairs = Vec::new();
    let mut crack_cells = 0..0;
    let mut crack_row = 0;
    if let Some(spec) = crack {
        if !(spec.y_line > 0.0 && spec.y_line < 1.0) {
            return Err(Error::MisalignedCrack(format!(
                "crack line y = {} outside (0, 1)",
                spec.y_line
            )));
        }
        if !(spec.tip_x > 0.0 && spec.tip_x < 1.0) {
            return Err(Error::MisalignedCrack(format!(
                "crack tip x = {} outside (0, 1)",
                spec.tip_x
            )));
        }
        let jc = grid_index(spec.y_line, ny, "crack line y")?;
        let ic = grid_index(spec.tip_x, nx, "crack tip x")?;
        if jc == 0 || jc == ny || ic == 0 || ic == nx {
            return Err(Error::MisalignedCrack(
                "crack has zero span on this grid".into(),
            ));
        }
        crack_row = jc;
        tip_node = Some(node_id(ic, jc));
        let seam: Vec<usize> = match spec.mouth_edge {
            MouthEdge::Left => (0..ic).collect(),
            MouthEdge::Right => ((ic + 1)..=nx).rev().collect(),
        };
        crack_cells = match spec.mouth_edge {
            MouthEdge::Left => 0..ic,
            MouthEdge::Right => ic..nx,
        };
        let mut lower_of = vec![usize::MAX; nx + 1];
        for &i in &seam {
            let upper = node_id(i, jc);
            let lower = nodes.len();
            nodes.push(nodes[upper]);
            lower_of[i] = lower;
            face_pairs.push((upper, lower));
        }
        // Rewire the row of cells just below the crack onto the lower face.
        for i in crack_cells.clone() {
            let e = (jc - 1) * nx + i;
            for corner in [2, 3] {
                let gi = if corner == 2 { i + 1 } else { i };
                if lower_of[gi] != usize::MAX {
                    elements[e][corner] = lower_of[gi];
                }
            }
        }
    }

    for i in 0..nx {
        push_facet(&elements, i, 0, BoundaryTag::Bottom);
    }
    for j in 0..ny {
        push_facet(&elements, j * nx + nx - 1, 1, BoundaryTag::Right);
    }
    for i in (0..nx).rev() {
        push_facet(&elements, (ny - 1) * nx + i, 2, BoundaryTag::Top);
    }
    for j in (0..ny).rev() {
        push_facet(&elements, j * nx, 3, BoundaryTag::Left);
    }
    for i in crack_cells {
        push_facet(&elements, crack_row * nx + i, 0, BoundaryTag::CrackUpper);
        push_facet(
            &elements,
            (crack_row - 1) * nx + i,
            2,
            BoundaryTag::CrackLower,
        );
    }

    Ok(CrackedMesh {
        nx,
        ny,
        crack,
        nodes,
        elements,
        facets,
        tip_node,
        face_pairs,
    })
}

/// Splits every cell into four; crack geometry and tags carry over.
pub fn refine_uniform(mesh: &CrackedMesh) -> CrackedMesh {
    build_mesh(2 * mesh.nx, 2 * mesh.ny, mesh.crack)
        .expect("refining a valid mesh keeps it aligned")
}

impl CrackedMesh {
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn crack(&self) -> Option<&CrackSpec> {
        self.crack.as_ref()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn element_vertices(&self, e: usize) -> [[f64; 2]; 4] {
        self.elements[e].map(|n| self.nodes[n])
    }

    pub fn facets_with_tag(&self, tag: BoundaryTag) -> impl Iterator<Item = &BoundaryFacet> {
        self.facets.iter().filter(move |f| f.tag == tag)
    }

    /// Plain-text listing: `id x y` per node, `id n0 n1 n2 n3` per element, `facet n_a n_b TAG` per boundary facet.
    pub fn write_dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# nodes {}", self.nodes.len())?;
        for (id, [x, y]) in self.nodes.iter().enumerate() {
            writeln!(out, "{id} {x:.17e} {y:.17e}")?;
        }
        writeln!(out, "# elements {}", self.elements.len())?;
        for (id, v) in self.elements.iter().enumerate() {
            writeln!(out, "{id} {} {} {} {}", v[0], v[1], v[2], v[3])?;
        }
        writeln!(out, "# facets {}", self.facets.len())?;
        for f in &self.facets {
            writeln!(out, "facet {} {} {}", f.nodes[0], f.nodes[1], f.tag.label())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_grid_counts() {
        let m = build_grid(2, 2).unwrap();
        assert_eq!(m.num_nodes(), 9);
        assert_eq!(m.num_elements(), 4);
        assert!(m.tip_node.is_none());
        assert_eq!(m.facets.len(), 8);
    }

    #[test]
    fn cracked_4x4_duplicates_two_nodes() {
        let m = build_cracked_grid(4, 4, CrackSpec::default()).unwrap();
        assert_eq!(m.num_nodes(), 27);
        assert_eq!(m.face_pairs.len(), 2);
        let xs: Vec<f64> = m.face_pairs.iter().map(|&(u, _)| m.nodes[u][0]).collect();
        assert_eq!(xs, vec![0.0, 0.25]);
        assert_eq!(m.nodes[m.tip_node.unwrap()], [0.5, 0.5]);
        assert_eq!(m.facets_with_tag(BoundaryTag::CrackUpper).count(), 2);
        assert_eq!(m.facets_with_tag(BoundaryTag::CrackLower).count(), 2);
    }

    #[test]
    fn right_mouth_is_mirror_image() {
        let m = build_cracked_grid(
            4,
            4,
            CrackSpec {
                mouth_edge: MouthEdge::Right,
                ..Default::default()
            },
        )
        .unwrap();
        let xs: Vec<f64> = m.face_pairs.iter().map(|&(u, _)| m.nodes[u][0]).collect();
        assert_eq!(xs, vec![1.0, 0.75]);
    }

    #[test]
    fn odd_rows_misalign_the_crack() {
        assert!(matches!(
            build_cracked_grid(4, 3, CrackSpec::default()),
            Err(Error::MisalignedCrack(_))
        ));
        assert!(matches!(
            build_cracked_grid(3, 4, CrackSpec::default()),
            Err(Error::MisalignedCrack(_))
        ));
        assert!(matches!(build_grid(1, 4), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn refinement_doubles_the_seam() {
        let m = refine_uniform(&build_cracked_grid(4, 4, CrackSpec::default()).unwrap());
        assert_eq!(m.num_elements(), 64);
        let xs: Vec<f64> = m.face_pairs.iter().map(|&(u, _)| m.nodes[u][0]).collect();
        assert_eq!(xs, vec![0.0, 0.125, 0.25, 0.375]);
        assert_eq!(
            refine_uniform(&build_grid(2, 2).unwrap()).num_elements(),
            16
        );
    }

    #[test]
    fn dump_format() {
        let m = build_grid(2, 2).unwrap();
        let mut buf = Vec::new();
        m.write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().any(|l| l == "0 0 1 4 3"));
        assert!(text.lines().any(|l| l == "facet 0 1 GAMMA1_BOTTOM"));
        assert_eq!(text.lines().filter(|l| l.starts_with("facet")).count(), 8);
    }
}
