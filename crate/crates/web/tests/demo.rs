use phasebell_web::{record_demo_json, sweep_svg, visibility_json};

#[test]
fn sweep_plot_has_three_lines() {
    let svg = sweep_svg(2.4, 40, 300, 7, "appendix-first-harmonic", 1.0).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);
    assert!(svg.contains("reduced at σ_L=0.8"));
    assert!(sweep_svg(2.4, 40, 300, 7, "nope", 1.0).is_err());
    assert!(sweep_svg(2.4, 1, 300, 7, "second-harmonic", 1.0).is_err());
}

#[test]
fn visibility_threshold() {
    let v: serde_json::Value = serde_json::from_str(&visibility_json(1.0, 1.0).unwrap()).unwrap();
    assert!((v["s_max"].as_f64().unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["violates"], true);
    let v: serde_json::Value = serde_json::from_str(&visibility_json(1.0, 0.5f64.sqrt()).unwrap()).unwrap();
    assert_eq!(v["violates"], false);
    assert!(visibility_json(1.2, 0.5).is_err());
    assert!(visibility_json(0.5, -0.1).is_err());
}

#[test]
fn record_demo_estimates() {
    let v: serde_json::Value =
        serde_json::from_str(&record_demo_json(0.3, 20_000.0, 1, "second-harmonic").unwrap()).unwrap();
    let red = v["reduced"]["S"].as_f64().unwrap();
    assert!((red - 2.0 * 2f64.sqrt() * (-0.18f64).exp()).abs() < 0.05, "{red}");
    assert!(v["raw"]["S"].as_f64().unwrap() < 2.0);
    assert!(record_demo_json(0.3, 10.0, 1, "second-harmonic").is_err());
}
