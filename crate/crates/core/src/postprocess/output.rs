use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{FieldMap, LineSample, NodalValues, OpeningPoint, SweepRow};
use crate::error::Result;
use crate::mesh::CrackedMesh;

/// Legacy ASCII VTK unstructured grid with one POINT_DATA entry per field.
pub fn write_vtk(fields: &FieldMap, mesh: &CrackedMesh, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_vtk_to(&mut out, fields, mesh)?;
    out.flush()?;
    Ok(())
}

pub fn write_vtk_to<W: Write>(out: &mut W, fields: &FieldMap, mesh: &CrackedMesh) -> Result<()> {
    writeln!(out, "# vtk DataFile Version 3.0")?;
    writeln!(out, "strainlimit solution")?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(out, "POINTS {} double", mesh.num_nodes())?;
    for [x, y] in &mesh.nodes {
        writeln!(out, "{x:.17e} {y:.17e} 0")?;
    }
    let ne = mesh.num_elements();
    writeln!(out, "CELLS {} {}", ne, 5 * ne)?;
    for v in &mesh.elements {
        writeln!(out, "4 {} {} {} {}", v[0], v[1], v[2], v[3])?;
    }
    writeln!(out, "CELL_TYPES {ne}")?;
    for _ in 0..ne {
        writeln!(out, "9")?;
    }
    if fields.is_empty() {
        return Ok(());
    }
    writeln!(out, "POINT_DATA {}", mesh.num_nodes())?;
    for (name, field) in fields {
        let name = name.replace(char::is_whitespace, "_");
        match &field.values {
            NodalValues::Scalar(v) => {
                writeln!(out, "SCALARS {name} double 1")?;
                writeln!(out, "LOOKUP_TABLE default")?;
                for x in v {
                    writeln!(out, "{x:.17e}")?;
                }
            }
            NodalValues::Vector(v) => {
                writeln!(out, "VECTORS {name} double")?;
                for [x, y] in v {
                    writeln!(out, "{x:.17e} {y:.17e} 0")?;
                }
            }
            NodalValues::Tensor(v) => {
                writeln!(out, "TENSORS {name} double")?;
                for t in v {
                    let [[a, b], [_, d]] = t.to_matrix();
                    writeln!(out, "{a:.17e} {b:.17e} 0\n{b:.17e} {d:.17e} 0\n0 0 0")?;
                }
            }
        }
    }
    Ok(())
}

/// A record that can be written as one CSV row.
pub trait CsvRecord {
    fn header() -> Vec<&'static str>;
    fn fields(&self) -> Vec<String>;
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

impl CsvRecord for SweepRow {
    fn header() -> Vec<&'static str> {
        vec![
            "parameter",
            "value",
            "max_stress_norm",
            "max_strain_norm",
            "max_principal_stress",
            "min_principal_stress",
            "max_principal_strain",
            "min_principal_strain",
            "stress_argmax_node",
            "strain_argmax_node",
            "converged",
            "iterations",
            "damping",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.parameter.to_string(),
            num(self.value),
            num(self.max_stress_norm),
            num(self.max_strain_norm),
            num(self.max_principal_stress),
            num(self.min_principal_stress),
            num(self.max_principal_strain),
            num(self.min_principal_strain),
            self.stress_argmax_node.to_string(),
            self.strain_argmax_node.to_string(),
            self.converged.to_string(),
            self.iterations.to_string(),
            num(self.damping),
        ]
    }
}

impl CsvRecord for OpeningPoint {
    fn header() -> Vec<&'static str> {
        vec!["x", "jump"]
    }

    fn fields(&self) -> Vec<String> {
        vec![num(self.x), num(self.jump)]
    }
}

impl CsvRecord for LineSample {
    fn header() -> Vec<&'static str> {
        vec!["x", "y", "value"]
    }

    fn fields(&self) -> Vec<String> {
        vec![num(self.x), num(self.y), num(self.value)]
    }
}

pub fn write_csv_to<W: Write, R: CsvRecord>(out: &mut W, rows: &[R]) -> Result<()> {
    writeln!(out, "{}", R::header().join(","))?;
    for r in rows {
        writeln!(out, "{}", r.fields().join(","))?;
    }
    Ok(())
}

/// Header line plus one row per record; floats carry 17 significant digits.
pub fn write_csv<R: CsvRecord>(rows: &[R], path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_csv_to(&mut out, rows)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_grid;
    use crate::postprocess::{NodalField, SweepParameter};
    use crate::tensor::SymTensor2;

    #[test]
    fn empty_csv_is_header_only() {
        let mut buf = Vec::new();
        write_csv_to::<_, OpeningPoint>(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,jump\n");
    }

    #[test]
    fn csv_values_round_trip_bitwise() {
        let rows = [
            OpeningPoint {
                x: 0.1,
                jump: 1.0 / 3.0,
            },
            OpeningPoint {
                x: 2.0f64.sqrt(),
                jump: -1e-300,
            },
        ];
        let mut buf = Vec::new();
        write_csv_to(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let parsed: Vec<OpeningPoint> = text
            .lines()
            .skip(1)
            .map(|l| {
                let v: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
                OpeningPoint {
                    x: v[0],
                    jump: v[1],
                }
            })
            .collect();
        assert_eq!(parsed, rows);
    }

    #[test]
    fn sweep_rows_have_matching_columns() {
        let row = SweepRow {
            parameter: SweepParameter::B,
            value: 0.02,
            ..SweepRow::default()
        };
        assert_eq!(row.fields().len(), SweepRow::header().len());
    }

    #[test]
    fn minimal_vtk_file() {
        // The smallest grid is 2×2; a 1-cell mesh is emulated by trimming.
        let mut mesh = build_grid(2, 2).unwrap();
        mesh.elements.truncate(1);
        mesh.nodes = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        mesh.elements[0] = [0, 1, 2, 3];
        let mut fields = FieldMap::new();
        fields.insert(
            "s".into(),
            NodalField::scalar("s", "1", vec![1.0, 2.0, 3.0, 4.0]),
        );
        fields.insert(
            "t".into(),
            NodalField::tensor("t", "1", vec![SymTensor2::IDENTITY; 4]),
        );
        let mut buf = Vec::new();
        write_vtk_to(&mut buf, &fields, &mesh).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("POINTS 4 double"));
        assert!(text.contains("CELLS 1 5"));
        assert!(text.contains("CELL_TYPES 1\n9\n"));
        let data_entries = text
            .lines()
            .filter(|l| {
                l.starts_with("SCALARS") || l.starts_with("VECTORS") || l.starts_with("TENSORS")
            })
            .count();
        assert_eq!(data_entries, fields.len());
    }
}
