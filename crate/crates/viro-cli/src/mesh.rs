//! Mesh export of piecewise-linear complexes.
//!
//! Two text formats are produced: Wavefront OBJ for complexes living in
//! ambient dimension at most three, and SVG for complexes in the plane.
//! Both embed the exact rational coordinates as comments next to the
//! floating-point geometry, list vertices and cells in their stored
//! order (so identical complexes give byte-identical files), and turn an
//! empty complex into a valid empty document.

use num_traits::ToPrimitive;
use viro_core::complex::PLComplex;
use viro_core::Rat;

use crate::formats::rat_string;
use crate::CliError;

fn approx(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn exact_tuple(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(rat_string).collect();
    format!("({})", parts.join(", "))
}

fn ambient_dim(c: &PLComplex) -> usize {
    c.vertices.first().map_or(0, |v| v.len())
}

fn max_cell_dim(c: &PLComplex) -> Option<usize> {
    (0..c.cells.len())
        .rev()
        .find(|&d| !c.cells[d].is_empty())
}

/// Render the complex as a Wavefront OBJ document.  Vertices become `v`
/// records (padded with zeros to three coordinates), 0-cells `p`, 1-cells
/// `l`, and 2-cells `f` records; the exact coordinates precede the
/// geometry as comments.
pub fn export_obj(c: &PLComplex) -> Result<String, CliError> {
    let dim = ambient_dim(c);
    if dim > 3 {
        return Err(CliError::Domain(format!(
            "OBJ export needs ambient dimension at most 3, got {dim}"
        )));
    }
    if let Some(d) = max_cell_dim(c) {
        if d > 2 {
            return Err(CliError::Domain(format!(
                "OBJ export supports cells of dimension at most 2, got {d}"
            )));
        }
    }
    let mut out = String::new();
    out.push_str("# piecewise-linear complex\n");
    out.push_str(&format!("# {} vertices\n", c.vertices.len()));
    for (i, v) in c.vertices.iter().enumerate() {
        out.push_str(&format!("# exact v{} = {}\n", i + 1, exact_tuple(v)));
    }
    for v in &c.vertices {
        let mut coords: Vec<f64> = v.iter().map(approx).collect();
        coords.resize(3, 0.0);
        out.push_str(&format!("v {} {} {}\n", coords[0], coords[1], coords[2]));
    }
    let keyword = ["p", "l", "f"];
    for (d, cells) in c.cells.iter().enumerate().take(3) {
        for cell in cells {
            let ids: Vec<String> = cell
                .vertex_indices
                .iter()
                .map(|&i| (i + 1).to_string())
                .collect();
            out.push_str(&format!("{} {}\n", keyword[d], ids.join(" ")));
        }
    }
    Ok(out)
}

/// Render a planar complex as an SVG document.  1-cells become line
/// segments, 2-cells filled polygons, 0-cells small dots; the exact
/// coordinates are embedded as comments.  The vertical axis is flipped so
/// the picture matches the usual mathematical orientation.
pub fn export_svg(c: &PLComplex) -> Result<String, CliError> {
    let dim = ambient_dim(c);
    if !c.vertices.is_empty() && dim != 2 {
        return Err(CliError::Domain(format!(
            "SVG export needs ambient dimension 2, got {dim}"
        )));
    }
    if let Some(d) = max_cell_dim(c) {
        if d > 2 {
            return Err(CliError::Domain(format!(
                "SVG export supports cells of dimension at most 2, got {d}"
            )));
        }
    }
    if c.vertices.is_empty() {
        return Ok("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\"/>\n".into());
    }
    let xs: Vec<f64> = c.vertices.iter().map(|v| approx(&v[0])).collect();
    let ys: Vec<f64> = c.vertices.iter().map(|v| approx(&v[1])).collect();
    let min = |s: &[f64]| s.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = |s: &[f64]| s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (x0, x1, y0, y1) = (min(&xs), max(&xs), min(&ys), max(&ys));
    let span = (x1 - x0).max(y1 - y0).max(1.0);
    let pad = span * 0.05;
    // Flip the vertical axis: a point (x, y) is drawn at (x, y0 + y1 - y).
    let fy = |y: f64| y0 + y1 - y;
    let view = format!(
        "{} {} {} {}",
        x0 - pad,
        y0 - pad,
        (x1 - x0) + 2.0 * pad,
        (y1 - y0) + 2.0 * pad
    );
    let stroke = span / 150.0;
    let dot = span / 80.0;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{view}\">\n"
    ));
    for (i, v) in c.vertices.iter().enumerate() {
        out.push_str(&format!("<!-- exact v{} = {} -->\n", i, exact_tuple(v)));
    }
    if c.cells.len() > 2 {
        for cell in &c.cells[2] {
            let pts: Vec<String> = cell
                .vertex_indices
                .iter()
                .map(|&i| format!("{},{}", xs[i], fy(ys[i])))
                .collect();
            out.push_str(&format!(
                "<polygon points=\"{}\" fill=\"#9ecae1\" stroke=\"none\"/>\n",
                pts.join(" ")
            ));
        }
    }
    if c.cells.len() > 1 {
        for cell in &c.cells[1] {
            let [a, b] = [cell.vertex_indices[0], cell.vertex_indices[1]];
            out.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" \
                 stroke=\"#08306b\" stroke-width=\"{stroke}\" stroke-linecap=\"round\"/>\n",
                xs[a],
                fy(ys[a]),
                xs[b],
                fy(ys[b])
            ));
        }
    }
    if !c.cells.is_empty() {
        for cell in &c.cells[0] {
            let i = cell.vertex_indices[0];
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"{dot}\" fill=\"#08306b\"/>\n",
                xs[i],
                fy(ys[i])
            ));
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use viro_core::complex::PLComplex;
    use viro_core::{rat, rat_int};

    fn segment_complex() -> PLComplex {
        let vertices = vec![
            vec![rat_int(0), rat_int(0)],
            vec![rat(1, 2), rat_int(1)],
        ];
        PLComplex::from_simplices(&vertices, &[vec![0, 1]])
    }

    #[test]
    fn obj_contains_exact_and_float_rows() {
        let c = segment_complex();
        let obj = export_obj(&c).unwrap();
        assert!(obj.contains("# exact v2 = (1/2, 1)"));
        assert!(obj.contains("v 0.5 1 0"));
        assert!(obj.contains("l 1 2"));
    }

    #[test]
    fn svg_contains_line_and_comments() {
        let c = segment_complex();
        let svg = export_svg(&c).unwrap();
        assert!(svg.starts_with("<svg "));
        assert!(svg.contains("<!-- exact v1 = (1/2, 1) -->"));
        assert!(svg.contains("<line "));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn empty_complex_is_valid() {
        let c = PLComplex {
            vertices: vec![],
            cells: vec![],
        };
        let obj = export_obj(&c).unwrap();
        assert!(obj.starts_with("# piecewise-linear complex"));
        let svg = export_svg(&c).unwrap();
        assert!(svg.starts_with("<svg "));
    }

    #[test]
    fn deterministic_output() {
        let c = segment_complex();
        assert_eq!(export_obj(&c).unwrap(), export_obj(&c).unwrap());
        assert_eq!(export_svg(&c).unwrap(), export_svg(&c).unwrap());
    }

    #[test]
    fn high_dimension_rejected() {
        let vertices = vec![vec![rat_int(0); 4], vec![rat_int(1); 4]];
        let c = PLComplex::from_simplices(&vertices, &[vec![0, 1]]);
        assert!(matches!(export_obj(&c), Err(CliError::Domain(_))));
        assert!(matches!(export_svg(&c), Err(CliError::Domain(_))));
    }
}
