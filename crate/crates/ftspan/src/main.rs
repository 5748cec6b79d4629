fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Ok(workers) = std::env::var("FTSPAN_WORKERS") {
        if let Ok(k) = workers.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
    std::process::exit(ftspan::cli::run(std::env::args()));
}
