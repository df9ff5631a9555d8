use copula_diag::curated;
fn main() {
    let dir = std::path::Path::new("data");
    let items = [
        ("m.diag", curated::m_diagonal()),
        ("w.diag", curated::w_diagonal()),
        ("plateau.diag", curated::plateau()),
        ("exKCA.diag", curated::ex_kca()),
        ("ex412.diag", curated::ex412()),
        ("ex_x2.diag", curated::x_squared_chords(256)),
    ];
    for (name, d) in items {
        std::fs::write(dir.join(name), d.to_diag_string()).unwrap();
    }
}
