import logging

from pydantic_settings import BaseSettings

logger = logging.getLogger(__name__)


class SolverSettings(BaseSettings):
    # Closest-point search
    CLOSEST_POINT_SEEDS: int = 32
    CLUSTER_RADIUS_FACTOR: float = 1e-6
    TIE_TOLERANCE_FACTOR: float = 1e-8

    # Ridge detection
    RIDGE_BAND: float = 1e-3
    RIDGE_SAFETY_MARGIN: float = 1e-6
    RIDGE_GAP_CELLS: float = 2.0

    # Convex body numerics
    SUPPORT_SAMPLES: int = 65536
    GAUSS_MAP_TOL: float = 1e-12
    BODY_SAMPLES: int = 4096

    # Discretization
    CUT_CELL_MIN_FRACTION: float = 1e-3
    CHUNK_SIZE: int = 4096

    # Verification defaults
    EP_FRACTION_LIMIT: float = 0.05
    RIDGE_GAP_LIMIT: float = 2.0
    SEGMENT_FRACTION_LIMIT: float = 0.99
    W2INF_RATIO_LIMIT: float = 1.2

    LOG_LEVEL: str = "WARNING"
    OUTPUT_DIR: str = "./runs"

    class Config:
        env_prefix = "GAUGEPLASTIC_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = True
        extra = "ignore"


def get_settings():
    """Get settings and validate the numeric knobs"""
    try:
        settings = SolverSettings()

        if settings.CLOSEST_POINT_SEEDS < 4:
            raise ValueError("CLOSEST_POINT_SEEDS must be at least 4")
        if not 0.0 < settings.RIDGE_BAND < 1.0:
            raise ValueError("RIDGE_BAND must lie in (0, 1)")
        if settings.SUPPORT_SAMPLES < 1024:
            raise ValueError("SUPPORT_SAMPLES must be at least 1024")
        if not 0.0 < settings.CUT_CELL_MIN_FRACTION <= 1.0:
            raise ValueError("CUT_CELL_MIN_FRACTION must lie in (0, 1]")

        return settings
    except Exception as e:
        logger.error("Configuration error: %s", e)
        raise


settings = get_settings()
