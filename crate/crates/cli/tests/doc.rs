use residue_cli::doc::{LambdaGrid, Method, Plan, ScenarioDocument};

const MELLIN: &str = r#"
schema = 1
pipeline = "mellin"

[chart]
exponents = [[1, 0, 0], [0, 1, 0], [0, 1, 1]]
dbar = [false, true, true]

[form]
anti = [1]
factors = [
  { profile = "gaussian", var = 1, radius = 0.3, dbar = true },
  { profile = "poly-gaussian", var = 2, radius = 0.3, poly = [[0, 0, 1.0, 0.0], [2, 0, 3.0, 0.0]] },
  { profile = "plateau", arg = "z3", inner = 1.5, outer = 2.0 },
]

[mellin]
lambda = [[0.1, 0.1, 0.1]]
method = "both"

[quadrature]
preset = "coarse"
truncation = [1.8, 1.8, 2.0]
"#;

#[test]
fn a_full_mellin_document_validates() {
    let d = ScenarioDocument::from_toml(MELLIN).unwrap();
    let Plan::Mellin(p) = d.validate().unwrap() else { panic!("not a mellin plan") };
    assert_eq!(p.name, "mellin");
    assert_eq!(p.chart.m(), 3);
    assert_eq!(p.form.bidegree(), (3, 1));
    assert_eq!(p.method, Method::Both);
    assert_eq!(p.two_path_tol, 1e-5);
    assert_eq!(p.spec.truncation, vec![Some(1.8), Some(1.8), Some(2.0)]);
    assert_eq!(p.spec.nodes_per_panel, 6);
}

#[test]
fn lambda_points_must_match_the_chart() {
    let d = ScenarioDocument::from_toml(&MELLIN.replace("[[0.1, 0.1, 0.1]]", "[[0.1, 0.1]]")).unwrap();
    assert_eq!(d.validate().unwrap_err().path, "mellin.lambda[0]");
}

#[test]
fn factor_needs_exactly_one_argument() {
    let d = ScenarioDocument::from_toml(&MELLIN.replace("arg = \"z3\"", "var = 3, arg = \"z3\"")).unwrap();
    assert_eq!(d.validate().unwrap_err().path, "form.factors[2]");
}

#[test]
fn plateau_radii_are_ordered() {
    let d = ScenarioDocument::from_toml(&MELLIN.replace("outer = 2.0", "outer = 1.0")).unwrap();
    assert_eq!(d.validate().unwrap_err().path, "form.factors[2].outer");
}

#[test]
fn lambda_grid_forms() {
    assert_eq!(LambdaGrid::parse("default", "g").unwrap().points().len(), 27);
    assert_eq!(LambdaGrid::parse("coarse", "g").unwrap().points().len(), 8);
    assert_eq!(LambdaGrid::parse("0.1,0.2,0.3; 1,1,1", "g").unwrap().points().len(), 2);
    assert_eq!(LambdaGrid::parse("0.1,x,0.3", "g").unwrap_err().path, "g[0]");
}

#[test]
fn registry_document() {
    let d = ScenarioDocument::from_toml("schema = 1\npipeline = \"scenario\"\nname = \"s3\"\n[scenario]\nname = \"section3\"\nlambda_grid = \"coarse\"\n")
        .unwrap();
    match d.validate().unwrap() {
        Plan::Registry { name, grid } => {
            assert_eq!(name, "s3");
            assert_eq!(grid, Some(LambdaGrid::Coarse));
        }
        _ => panic!("not a registry plan"),
    }
}

#[test]
fn output_names_are_restricted() {
    let d = ScenarioDocument::from_toml(&MELLIN.replace("pipeline = \"mellin\"", "pipeline = \"mellin\"\nname = \"../x\"")).unwrap();
    assert_eq!(d.validate().unwrap_err().path, "name");
}

#[test]
fn iterated_paths_use_one_based_order() {
    let text = r#"
schema = 1
pipeline = "regularize"
[chart]
exponents = [[1, 0], [0, 1]]
dbar = [false, true]
[form]
anti = [1]
factors = [{ profile = "gaussian", var = 1, radius = 0.5, dbar = true }, { profile = "gaussian", var = 2, radius = 0.5 }]
[regularize]
cutoffs = ["rational", "smoothstep(0.5,2)"]
[[regularize.paths]]
kind = "iterated"
order = [1, 2]
deltas = [1e-2, 1e-3, 1e-4]
"#;
    let Plan::Regularize(p) = ScenarioDocument::from_toml(text).unwrap().validate().unwrap() else { panic!() };
    assert_eq!(p.cutoffs[1].name(), "smoothstep(0.5, 2)");
    let bad = ScenarioDocument::from_toml(&text.replace("order = [1, 2]", "order = [0, 2]")).unwrap();
    assert_eq!(bad.validate().unwrap_err().path, "regularize.paths[0].order");
}
