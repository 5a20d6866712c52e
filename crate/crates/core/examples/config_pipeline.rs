//! Runs the full pipeline from a config string and writes the output files.

use ribbonfold::io::parse_config;
use ribbonfold::pipeline::simulate;

const CONFIG: &str = "\
# helix folded by an antikink, resampled onto a constant time rate
shape = helix:1:0.1
length = 10
nodes = 201
width = constant:1
boundary = antikink:a=1,b=-2
u_max = 3
n_u = 61
time = constant:1.5
time_max = 2
n_t = 9
";

fn main() -> ribbonfold::Result<()> {
    let cfg = parse_config(CONFIG)?;
    let sim = simulate(&cfg)?;
    print!("{}", sim.summary());

    let dir = std::env::temp_dir().join("ribbonfold-example");
    for path in sim.write_outputs(&dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
