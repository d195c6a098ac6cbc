//! Scene files: a field, a backend, a window margin and a list of region
//! generators, compiled to a [`SheafObject`].

use std::path::Path;

use num::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldla::FieldPrime;
use crate::numeric::{fmt_q, q, qf, qserde, Point, Q};
use crate::plancx::build_grid;
use crate::region::{Closure, Region};
use crate::sheafobj::{
    Backend, ConvexDiffRegion, ConvexGenerator, ConvexSheaf, GridGenerator, GridSheaf, SheafObject,
};

fn one() -> usize {
    1
}

fn two() -> u32 {
    2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneGenerator {
    pub region: Region,
    #[serde(default)]
    pub degree: i32,
    #[serde(default = "one")]
    pub mult: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    #[serde(default = "two")]
    pub field: u32,
    pub backend: Backend,
    #[serde(with = "qserde")]
    pub margin: Q,
    #[serde(default)]
    pub generators: Vec<SceneGenerator>,
}

impl Scene {
    pub fn new(backend: Backend, margin: Q, generators: Vec<SceneGenerator>) -> Scene {
        Scene { field: 2, backend, margin, generators }
    }

    pub fn field_prime(&self) -> Result<FieldPrime> {
        FieldPrime::new(self.field)
    }

    /// Bounding box of all regions.
    pub fn bbox(&self) -> Option<(Point, Point)> {
        let boxes: Vec<Point> = self
            .generators
            .iter()
            .filter_map(|g| g.region.bbox())
            .flat_map(|b| [b.min, b.max])
            .collect();
        crate::sheafobj::bbox_of(&boxes)
    }

    /// The window: bounding box grown by the margin (a unit square around
    /// the origin for an empty scene).
    pub fn window(&self) -> (Point, Point) {
        let (lo, hi) = self.bbox().unwrap_or((Point::ints(0, 0), Point::ints(0, 0)));
        let m = self.margin;
        (Point::new(lo.x - m, lo.y - m), Point::new(hi.x + m, hi.y + m))
    }

    /// Radii used on this scene must stay below the margin.
    pub fn check_radius(&self, a: Q) -> Result<()> {
        if a.abs() >= self.margin {
            return Err(Error::Margin { margin: fmt_q(&self.margin), radius: fmt_q(&a.abs()) });
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.field_prime()?;
        if !self.margin.is_positive() {
            return Err(Error::Schema { location: "margin".into(), message: "must be positive".into() });
        }
        for (index, g) in self.generators.iter().enumerate() {
            g.region
                .validate()
                .map_err(|e| Error::Generator { index, reason: e.to_string() })?;
            if g.mult == 0 {
                return Err(Error::Generator { index, reason: "multiplicity must be positive".into() });
            }
        }
        Ok(())
    }

    pub fn compile(&self) -> Result<SheafObject> {
        self.validate()?;
        let field = self.field_prime()?;
        let window = self.window();
        match self.backend {
            Backend::Grid => {
                let mut xs = vec![window.0.x, window.1.x];
                let mut ys = vec![window.0.y, window.1.y];
                for (index, g) in self.generators.iter().enumerate() {
                    g.region
                        .cuts(&mut xs, &mut ys)
                        .map_err(|e| Error::Generator { index, reason: e.to_string() })?;
                }
                xs.sort();
                xs.dedup();
                ys.sort();
                ys.dedup();
                let grid = build_grid(&xs, &ys)?;
                let mut gens = Vec::new();
                for (index, g) in self.generators.iter().enumerate() {
                    if let Region::Union { parts, disjoint: true } = &g.region {
                        let sets: Vec<_> = parts.iter().map(|p| grid.cells_where(|x| p.contains(x))).collect();
                        for i in 0..sets.len() {
                            for j in i + 1..sets.len() {
                                if !sets[i].intersection(&sets[j]).is_empty() {
                                    return Err(Error::Generator {
                                        index,
                                        reason: format!("union parts {i} and {j} overlap"),
                                    });
                                }
                            }
                        }
                    }
                    gens.push(GridGenerator {
                        cells: grid.cells_where(|x| g.region.contains(x)),
                        degree: g.degree,
                        mult: g.mult,
                    });
                }
                Ok(SheafObject::Grid(GridSheaf::new(grid, field, gens)?))
            }
            Backend::Convex => {
                let mut gens = Vec::new();
                for (index, g) in self.generators.iter().enumerate() {
                    let wrap = |e: Error| Error::Generator { index, reason: e.to_string() };
                    for region in convex_pieces(&g.region).map_err(wrap)? {
                        gens.push(ConvexGenerator { region, degree: g.degree, mult: g.mult });
                    }
                }
                Ok(SheafObject::Convex(ConvexSheaf::new(window, field, gens)?))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenes serialize")
    }

    pub fn from_json(text: &str) -> Result<Scene> {
        let scene: Scene = serde_json::from_str(text).map_err(|e| Error::Schema {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        scene.validate()?;
        Ok(scene)
    }
}

fn convex_pieces(region: &Region) -> Result<Vec<ConvexDiffRegion>> {
    match region {
        Region::Diff { outer, holes } => {
            let outer = outer.as_convex_body()?;
            let holes = holes.iter().map(Region::as_convex_body).collect::<Result<Vec<_>>>()?;
            Ok(vec![ConvexDiffRegion::new(outer, holes)?])
        }
        Region::Union { parts, .. } => {
            let mut out: Vec<ConvexDiffRegion> = Vec::new();
            for p in parts {
                out.extend(convex_pieces(p)?);
            }
            for i in 0..out.len() {
                for j in i + 1..out.len() {
                    if out[i].outer().intersects(out[j].outer()) {
                        return Err(Error::InvalidRegion(format!("union parts {i} and {j} meet")));
                    }
                }
            }
            Ok(out)
        }
        other => Ok(vec![ConvexDiffRegion::new(other.as_convex_body()?, Vec::new())?]),
    }
}

pub fn load_scene(path: &Path) -> Result<Scene> {
    let text = std::fs::read_to_string(path)?;
    let scene = Scene::from_json(&text)?;
    scene.compile()?;
    Ok(scene)
}

pub fn write_scene(scene: &Scene, path: &Path) -> Result<()> {
    std::fs::write(path, scene.to_json() + "\n")?;
    Ok(())
}

fn square(r: i128) -> Region {
    Region::closed_box(Point::ints(-r, -r), Point::ints(r, r))
}

/// `[-1,1]^2` minus its top and bottom edges.
pub fn edgeless_square(backend: Backend) -> Scene {
    let top = Region::segment(Point::ints(-1, 1), Point::ints(1, 1));
    let bottom = Region::segment(Point::ints(-1, -1), Point::ints(1, -1));
    Scene::new(
        backend,
        q(2),
        vec![SceneGenerator { region: Region::diff(square(1), vec![top, bottom]), degree: 0, mult: 1 }],
    )
}

/// Closed disc of radius `r` at the origin.
pub fn disc_scene(r: Q) -> Scene {
    Scene::new(
        Backend::Convex,
        q(2),
        vec![SceneGenerator { region: Region::disc(Point::ints(0, 0), r), degree: 0, mult: 1 }],
    )
}

/// The closed square `[-1,1]^2`.
pub fn square_scene(backend: Backend) -> Scene {
    Scene::new(backend, q(2), vec![SceneGenerator { region: square(1), degree: 0, mult: 1 }])
}

/// Two separated closed boxes, one of them in degree 1, and a half-open
/// strip; exercises several bars per direction on the grid backend.
pub fn mixed_grid_scene() -> Scene {
    let strip = Region::Box {
        min: Point::new(q(-2), qf(-1, 2)),
        max: Point::new(q(-1), qf(1, 2)),
        side_flags: crate::region::SideFlags { right: Closure::Open, ..Default::default() },
    };
    Scene::new(
        Backend::Grid,
        q(2),
        vec![
            SceneGenerator { region: Region::closed_box(Point::ints(0, 0), Point::ints(1, 1)), degree: 0, mult: 1 },
            SceneGenerator { region: Region::closed_box(Point::ints(2, -1), Point::ints(3, 0)), degree: 1, mult: 1 },
            SceneGenerator { region: strip, degree: 0, mult: 1 },
        ],
    )
}

/// Named scenes used by the verification suite.
pub fn suite_scenes() -> Vec<(&'static str, Scene)> {
    vec![
        ("edgeless-square-grid", edgeless_square(Backend::Grid)),
        ("edgeless-square-convex", edgeless_square(Backend::Convex)),
        ("disc-1/2", disc_scene(qf(1, 2))),
        ("disc-1", disc_scene(q(1))),
        ("disc-2", disc_scene(q(2))),
        ("square-grid", square_scene(Backend::Grid)),
        ("square-convex", square_scene(Backend::Convex)),
        ("mixed-grid", mixed_grid_scene()),
    ]
}

impl Scene {
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}
