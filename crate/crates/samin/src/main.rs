fn main() {
    // Die quietly on closed pipes (e.g. `samin solve ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(samin::cli::run());
}
