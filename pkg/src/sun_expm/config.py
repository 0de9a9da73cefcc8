"""Configuration module for sun-expm."""

import os
import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path

# 获取项目根目录
PROJECT_ROOT = Path(__file__).parent.parent

# Reproducibility
DEFAULT_SEED = int(os.environ.get("SUN_EXPM_SEED", "20240601"))

# Spectral tolerances (relative to the spectral diameter)
CLUSTER_RTOL = float(os.environ.get("SUN_EXPM_CLUSTER_RTOL", "1e-8"))
CONFLUENT_RTOL = float(os.environ.get("SUN_EXPM_CONFLUENT_RTOL", "1e-6"))

# Construction tolerance for hermitian / traceless checks (relative to max-norm)
CONSTRUCT_RTOL = float(os.environ.get("SUN_EXPM_CONSTRUCT_RTOL", "1e-12"))

# Iteration budgets
JACOBI_MAX_SWEEPS = int(os.environ.get("SUN_EXPM_JACOBI_MAX_SWEEPS", "50"))
ABERTH_MAX_ITER = int(os.environ.get("SUN_EXPM_ABERTH_MAX_ITER", "500"))

# Agreement between the determinant form and the Newton recurrence
INVARIANT_RTOL = float(os.environ.get("SUN_EXPM_INVARIANT_RTOL", "1e-10"))

# Contour quadrature
CONTOUR_POINTS = int(os.environ.get("SUN_EXPM_CONTOUR_POINTS", "512"))

# Benchmark and oracle gates
BENCH_REPEATS = int(os.environ.get("SUN_EXPM_BENCH_REPEATS", "5"))
ORACLE_RTOL = float(os.environ.get("SUN_EXPM_ORACLE_RTOL", "1e-9"))

# Logging configuration
LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO").upper()
LOG_MAX_FILE_SIZE = int(os.environ.get("LOG_MAX_FILE_SIZE", "10485760"))  # 10MB default
LOG_BACKUP_COUNT = int(os.environ.get("LOG_BACKUP_COUNT", "5"))

# 确保日志目录存在
LOG_DIR = Path(os.environ.get("LOG_DIR", str(PROJECT_ROOT / "logs")))
LOG_FILE = LOG_DIR / "sun_expm.log"

# 创建日志格式
log_formatter = logging.Formatter(
    "%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s"
)

# 创建日志文件处理程序，指定UTF-8编码和轮转
file_handler = None
try:
    LOG_DIR.mkdir(parents=True, exist_ok=True)
    file_handler = RotatingFileHandler(
        LOG_FILE,
        encoding="utf-8",
        maxBytes=LOG_MAX_FILE_SIZE,
        backupCount=LOG_BACKUP_COUNT,
    )
    file_handler.setFormatter(log_formatter)
except OSError:
    # read-only install location
    file_handler = None

# 创建控制台处理程序（仅在开发模式下）
console_handler = None
if os.environ.get("SUN_EXPM_ENV", "production").lower() == "development":
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(log_formatter)

logger = logging.getLogger("sun-expm")
logger.setLevel(getattr(logging, LOG_LEVEL, logging.INFO))

if file_handler and not any(isinstance(h, RotatingFileHandler) for h in logger.handlers):
    logger.addHandler(file_handler)

if console_handler:
    logger.addHandler(console_handler)


def log_configuration() -> None:
    """Log current configuration settings."""
    logger.info("=== sun-expm Configuration ===")
    logger.info(f"Default Seed: {DEFAULT_SEED}")
    logger.info(f"Cluster Tolerance (rel. diameter): {CLUSTER_RTOL}")
    logger.info(f"Confluent Crossover (rel. diameter): {CONFLUENT_RTOL}")
    logger.info(f"Construction Tolerance: {CONSTRUCT_RTOL}")
    logger.info(f"Jacobi Sweep Budget: {JACOBI_MAX_SWEEPS}")
    logger.info(f"Aberth Iteration Budget: {ABERTH_MAX_ITER}")
    logger.info(f"Invariant Agreement Tolerance: {INVARIANT_RTOL}")
    logger.info(f"Contour Points: {CONTOUR_POINTS}")
    logger.info(f"Benchmark Repeats: {BENCH_REPEATS}")
    logger.info(f"Oracle Tolerance: {ORACLE_RTOL}")
    logger.info(f"Log Level: {LOG_LEVEL}")
    logger.info(f"Log File: {LOG_FILE if file_handler else 'disabled'}")
    logger.info("=== Configuration End ===")


def get_tolerances() -> dict:
    """Get the numerical tolerance settings as a dictionary."""
    return {
        "cluster_rtol": CLUSTER_RTOL,
        "confluent_rtol": CONFLUENT_RTOL,
        "construct_rtol": CONSTRUCT_RTOL,
        "invariant_rtol": INVARIANT_RTOL,
        "oracle_rtol": ORACLE_RTOL,
    }
