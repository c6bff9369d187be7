//! Prints a `.lgt` file in canonical form.

fn main() {
    let path = std::env::args()
        .nth(1)
        .expect("usage: print_fixture <file.lgt>");
    let text = std::fs::read_to_string(&path).expect("readable file");
    match slt_core::parse(&text) {
        Ok(f) => print!("{}", slt_core::print(&f.main, &f.decls)),
        Err(diags) => diags.iter().for_each(|d| eprintln!("{path}: {d}")),
    }
}
