//! Facets, faces and the cone partition of a Newton polyhedron.
//!
//! ```bash
//! cargo run --example newton_polyhedron -- "x^2 + y^3"
//! ```

use igusa::mpoly::parse_polynomial;
use igusa::newton::{build_polyhedron, face_polynomial};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "x^2 + y^3".to_string());
    let f = parse_polynomial(&text)?;
    let poly = build_polyhedron(&f)?;

    println!("f = {f}");
    println!("facets:");
    for facet in poly.facets() {
        println!("  normal {:?}  m = {}", facet.normal, facet.m_value);
    }

    println!("proper faces:");
    for face in poly.proper_faces() {
        let cone = poly.cone_of_face(face)?;
        println!(
            "  dim {}  f_tau = {}  cone generators {:?}",
            face.dim,
            face_polynomial(&f, face),
            cone.generators()
        );
    }

    let a = vec![1; f.nvars()];
    println!("m_f({a:?}) = {}", poly.m_of(&a)?);
    println!("cells partitioning the orthant: {}", poly.orthant_partition()?.len());
    Ok(())
}
