use mcsa_core::signatures::{severity_from_sidebands, DetectOptions, Side};
use mcsa_core::sim::preset;
use mcsa_core::{
    broken_bar_frequencies, compute_spectrum, detect_sidebands, diagnose_with_plan,
    find_fundamental, generate, DiagnosisConfig, FrftPlan, MotorParams, Normalization, RneMode,
    Severity, SimConfig, Verdict, WindowKind,
};

fn motor(f: f64, slip: f64) -> MotorParams {
    MotorParams {
        supply_frequency: f,
        pole_pairs: 2,
        rotor_slots: 28,
        bearing_balls: 8,
        rotor_mech_frequency: f * (1.0 - slip) / 2.0,
        slip,
    }
}

fn reseeded(name: &str, seed: u64) -> SimConfig {
    let mut c = preset(name).unwrap();
    c.seed = seed;
    c
}

#[test]
fn faulty_capture_shows_broken_bar_sidebands() {
    let c = preset("faulty-20hp-23Hz").unwrap();
    let sig = generate(&c).unwrap();
    let sp = compute_spectrum(
        &sig,
        WindowKind::Rectangular,
        Normalization::FundamentalUnit,
    );
    let fund = find_fundamental(&sp, (5.0, 60.0)).unwrap();
    assert_eq!(fund.frequency, 23.0);
    assert!((fund.magnitude - 1.0).abs() < 1e-12);

    let pairs = broken_bar_frequencies(&motor(23.0, 0.197), 1).unwrap();
    let m = detect_sidebands(&sp, fund.frequency, &pairs, DetectOptions::default()).unwrap();
    let lower = m.iter().find(|x| x.side == Side::Lower).unwrap();
    let upper = m.iter().find(|x| x.side == Side::Upper).unwrap();
    assert!((lower.frequency.unwrap() - 14.0).abs() < 0.1);
    assert!((upper.frequency.unwrap() - 32.0).abs() < 0.1);
    assert!((lower.magnitude - 0.47).abs() < 0.02, "{}", lower.magnitude);
    assert!((upper.magnitude - 0.42).abs() < 0.02, "{}", upper.magnitude);
    assert_eq!(
        severity_from_sidebands(&m).verdict,
        Severity::MultipleBarsCracked
    );
}

#[test]
fn healthy_capture_has_no_broken_bar() {
    for name in ["healthy-20hp-23Hz", "healthy-40hp-23Hz"] {
        let sig = generate(&preset(name).unwrap()).unwrap();
        let sp = compute_spectrum(&sig, WindowKind::Rectangular, Normalization::Raw);
        let pairs = broken_bar_frequencies(&motor(23.0, 0.197), 2).unwrap();
        let m = detect_sidebands(&sp, 23.0, &pairs, DetectOptions::default()).unwrap();
        assert!(m.iter().all(|x| !x.present), "{name}: {m:?}");
        assert_eq!(severity_from_sidebands(&m).verdict, Severity::NoBrokenBar);
    }
}

#[test]
fn rne_diagnosis_on_simulated_captures() {
    let plan = FrftPlan::new(4000).unwrap();
    let cfg = DiagnosisConfig::default();
    for f in [8, 23] {
        let name = format!("healthy-20hp-{f}Hz");
        let a = generate(&preset(&name).unwrap()).unwrap();
        let b = generate(&reseeded(&name, 77)).unwrap();
        let r = diagnose_with_plan(&plan, &a, &b, &cfg).unwrap();
        assert!(r.mean_rne < 0.3, "{name}: {}", r.mean_rne);
        assert_eq!(r.verdict, Verdict::Healthy);
        assert_eq!(r.reference_label, format!("{name} seed={}", 2000 + f));
    }

    // Magnitude-mode separation of this pair falls short of the faulty
    // threshold (see the acceptance suite); complex values separate it.
    let a = generate(&preset("healthy-20hp-23Hz").unwrap()).unwrap();
    let b = generate(&preset("faulty-20hp-23Hz").unwrap()).unwrap();
    let complex = DiagnosisConfig {
        mode: RneMode::Complex,
        ..Default::default()
    };
    let r = diagnose_with_plan(&plan, &a, &b, &complex).unwrap();
    assert!(r.mean_rne > 0.5, "{}", r.mean_rne);
    assert_eq!(r.verdict, Verdict::Faulty);
    let mag = diagnose_with_plan(&plan, &a, &b, &DiagnosisConfig::default()).unwrap();
    assert!(mag.mean_rne > 0.3, "{}", mag.mean_rne);
    assert_ne!(mag.verdict, Verdict::Healthy);
}
