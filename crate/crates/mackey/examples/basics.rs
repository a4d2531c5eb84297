use mackey::homalg::ext_z;
use mackey::mackey::{parse_catalog, render_lewis};
use mackey::{RepLabel, Shape};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Shape::new(3, 1)?; // C_3
    let b1 = parse_catalog(g, "B1")?;
    let z = parse_catalog(g, "Z")?;
    for (d, m) in ext_z(&b1, &z)?.iter() {
        println!("Ext^{d} = {}", render_lewis(m));
    }

    let c4 = Shape::new(2, 2)?;
    let v = RepLabel::parse(c4, "4s-3L0")?;
    for (d, m) in mackey::spheres::bredon_homology(&v)?.iter() {
        println!("H_{d} = {}", render_lewis(m));
    }
    Ok(())
}
