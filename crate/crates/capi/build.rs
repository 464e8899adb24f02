use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").unwrap();
    let out_file = PathBuf::from(&crate_dir).join("include").join("invwell.h");

    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("INVWELL_H".to_string()),
        cpp_compat: true,
        documentation: true,
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            ..Default::default()
        },
        ..Default::default()
    };

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("unable to generate C bindings")
        .write_to_file(out_file);

    println!("cargo:rerun-if-changed=src/lib.rs");
}
