//! Compiling an ImgQL script and inspecting its expression graph.
//!
//! Shared subexpressions collapse into single nodes, and every node runs
//! exactly once however many roots use it.

use imgql::dsl::{Bindings, EvalOptions, ImportResolver, Program};
use imgql::imaging::save_color_png;
use imgql::{ColorImage, GridDims};

const SCRIPT: &str = r#"
load img = "$DIR/scene.png"
let dark = intensity(img) <. 80
let lesion = maxvol(dark & !border)
let halo = distleq(2, lesion) & !lesion
print "lesion" volume(lesion)
print "halo" volume(halo)
print "ppM" ppM(lesion)
save "$DIR/halo.png" halo
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("imgql-script-graph");
    std::fs::create_dir_all(&dir)?;
    let dims = GridDims::new(60, 40)?;
    let scene = ColorImage::from_fn(dims, |x, y| {
        if (x as f64 - 30.0).hypot(y as f64 - 20.0) < 10.0 {
            [60, 40, 30]
        } else {
            [210, 170, 150]
        }
    });
    save_color_png(dir.join("scene.png"), &scene)?;

    let bindings = Bindings::new().with("DIR", dir.display().to_string());
    let program = Program::compile(SCRIPT, "inline.imgql", None, &bindings, &ImportResolver::new())?;
    for (id, node) in program.graph().nodes().iter().enumerate() {
        println!("{id:3} {:<18} {}", node.ty.to_string(), program.graph().label(id as u32));
    }

    let report = program.run(&EvalOptions::default())?;
    for event in &report.events {
        if let Some(line) = event.print_line() {
            println!("{line}");
        }
    }
    let counts = report.evaluation.eval_counts();
    println!(
        "{} nodes, each evaluated {:?} time(s)",
        counts.len(),
        counts.iter().copied().max()
    );
    Ok(())
}
