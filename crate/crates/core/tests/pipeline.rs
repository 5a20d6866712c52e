use ribbonfold::curve::contact_in_points;
use ribbonfold::io::{parse_config, read_psi_csv, TimeSpec};
use ribbonfold::pipeline::{simulate, PSI_FILE, SUMMARY_FILE, TRAJECTORY_FILE};

const FOLDING_CIRCLE: &str = "\
shape = circle:1
length = 8
nodes = 201
boundary = antikink:a=2,b=0
u_max = 6
n_u = 121
contact_threshold = 0.3
contact_exclusion = 10
";

#[test]
fn folding_circle_stops_at_first_contact() {
    let sim = simulate(&parse_config(FOLDING_CIRCLE).unwrap()).unwrap();
    let ev = sim.outcome.contact.expect("circle folds onto itself");
    assert_eq!(ev.slice, 55);
    assert_eq!((ev.contact.i, ev.contact.j), (0, 154));
    assert!(ev.contact.distance < 0.3);
    assert!((ev.u - sim.grid.u(55)).abs() < 1e-15);

    let slices = &sim.outcome.trajectory.slices;
    assert_eq!(slices.len(), 56);
    // Brute force: no earlier slice comes within the threshold.
    for s in &slices[..55] {
        let pts = s.curve.positions();
        for i in 0..pts.len() {
            for j in i + 11..pts.len() {
                assert!((pts[i] - pts[j]).norm() >= 0.3);
            }
        }
    }
    let last = slices[55].curve.positions();
    assert_eq!(contact_in_points(&last, 0.3, 10), Some(ev.contact));
}

#[test]
fn closed_form_agrees_with_the_solved_field() {
    let sim = simulate(&parse_config(FOLDING_CIRCLE).unwrap()).unwrap();
    assert!(sim.closed_form_error.unwrap() < 1e-3);
    // Discretisation level for a steep kink on a 201 x 121 grid.
    assert!(sim.residual < 1e-2);
}

#[test]
fn outputs_are_reproducible() {
    let text = format!("{FOLDING_CIRCLE}time = constant:2\ntime_max = 2\nn_t = 5\n");
    let cfg = parse_config(&text).unwrap();
    assert_eq!(cfg.time, TimeSpec::Constant(2.0));
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let sa = simulate(&cfg).unwrap();
    sa.write_outputs(a.path()).unwrap();
    simulate(&cfg).unwrap().write_outputs(b.path()).unwrap();
    for name in [PSI_FILE, TRAJECTORY_FILE, SUMMARY_FILE] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert!(x == y, "{name} differs between runs");
    }
    let table = read_psi_csv(&a.path().join(PSI_FILE)).unwrap();
    assert!(table.to_field().unwrap().max_abs_diff(&sa.outcome.field) < 1e-7);
    assert!(sa.summary().contains("contact = 55"));
}
