DEFAULT_CONFIG = {
    "LOG_CONFIG": {
        "log_format": "%(asctime)s.%(msecs)03d [%(levelname)s] %(name)s: %(message)s",
        "log_datefmt": "%Y-%m-%d %H:%M:%S",
        "default_level": "INFO",
    },
    "FLOWS": {
        "max_steps": 64,
        "library_version": "v1",
        "max_execution_length": 16,  # guard for ground-truth subsequence enumeration
    },
    "SIMULATION": {
        "instances_per_initiator": 100,
        "delay_min": 1,
        "delay_max": 10,
        "address_pool": 16,
        "n_traces": 20,
    },
    "SLICING": {
        "method": "causality",
        "addr_policy": "copy",
    },
    "SEQ_MODEL": {
        "kind": "count",
        "hidden": 64,
        "layers": 2,
        "batch_size": 32,
        "learning_rate": 0.05,
        "momentum": 0.9,
        "epochs": 50,
        "clip_norm": 5.0,
        "plateau_patience": 3,
        "init_scale": None,  # None → 1/sqrt(hidden)
    },
    "MINER": {
        "theta": 0.2,
        "theta_prime": None,  # None → same as theta
        "max_len": 8,
        "filters": (),
        "initiating_mode": "seed",
    },
}
