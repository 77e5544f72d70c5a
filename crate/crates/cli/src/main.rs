fn main() {
    if let Some(n) = std::env::var("FOLIATION_FORGE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    std::process::exit(foliation_cli::main_with_args(std::env::args_os()));
}
