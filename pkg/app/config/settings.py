from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Load environment variables and apply default metadata
    model_config = SettingsConfigDict(env_file=".env", env_ignore_empty=True, extra="forbid", frozen=True)

    # ------------------------------------------------------------------------------
    #                                 Model Defaults
    # ------------------------------------------------------------------------------
    gamma: float = Field(
        1.0, description="Gyromagnetic ratio used when --gamma is not given on the command line. Optional. Default: 1.0."
    )

    # ------------------------------------------------------------------------------
    #                               Numerics Settings
    # ------------------------------------------------------------------------------
    discord_grid_resolution: int = Field(
        90,
        ge=90,
        description="Angle count per axis of the measurement grid used by the numeric discord check. Optional. Default: 90.",
    )

    verify_slack: float = Field(
        1e-9,
        ge=0.0,
        description="Slack allowed by --verify when checking berta <= adabi <= lhs. Optional. Default: 1e-9.",
    )

    sweep_workers: int = Field(
        1, ge=1, description="Worker processes used to evaluate sweep grid points. Optional. Default: 1."
    )

    # ------------------------------------------------------------------------------
    #                                  App Settings
    # ------------------------------------------------------------------------------
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        "INFO", description="Logging level to show in file and console. Optional. Default: INFO"
    )

    log_dir: Optional[str] = Field(
        "logs", description="Directory for the rotating log file. Optional. Default: logs."
    )
