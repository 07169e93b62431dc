use critstrip_wasm::{certify_text, psi_text, rank_text};

#[test]
fn psi_shows_value_and_reduction() {
    let t = psi_text(2, "1", 128).unwrap();
    assert!(t.contains("-2.404113806319188570799476"), "{t}");
    assert!(t.contains("= -2*zeta(3)"), "{t}");
    assert!(psi_text(0, "-1", 128).unwrap_err().contains("pole"));
    assert!(psi_text(0, "1+i", 128).unwrap().starts_with("psi[0](1+i) = "));
}

#[test]
fn certificates_flip_at_threshold() {
    assert!(certify_text("gld", 23, 1, "", "1/2", 128).unwrap().contains("verdict: Certified"));
    assert!(certify_text("gld", 22, 1, "", "1/2", 128).unwrap().contains("verdict: NotCertified"));
    assert!(certify_text("modular", 1, 13, "12", "6", 128).unwrap().contains("verdict: Certified"));
    assert!(certify_text("modular", 1, -11, "12", "6", 128).unwrap().contains("verdict: NotCertified"));
    assert!(certify_text("siegel", 1, 1, "12", "6", 128).is_err());
}

#[test]
fn coprime_rank() {
    let t = rank_text(7, 2, 128).unwrap();
    assert!(t.contains("rank: 3\n") && t.contains("guarantee: 1\n"), "{t}");
}
