import pytest

from hypertrig.hypergroup import Hypergroup
from hypertrig.polynomial import Recurrence, cartier, chebyshev, polynomial_hypergroup


@pytest.fixture(autouse=True)
def configure_structlog() -> None:
    """
    Configures cleanly structlog for each test method.
    https://github.com/hynek/structlog/issues/76#issuecomment-240373958
    """
    import structlog

    structlog.reset_defaults()
    structlog.configure(
        processors=[
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.KeyValueRenderer(),
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=False,
    )


@pytest.fixture(scope="session")
def chebyshev_recurrence() -> Recurrence:
    return chebyshev()


@pytest.fixture(scope="session")
def cartier_recurrence() -> Recurrence:
    return cartier(2)


@pytest.fixture(scope="session")
def chebyshev_table(chebyshev_recurrence: Recurrence) -> Hypergroup:
    return polynomial_hypergroup(chebyshev_recurrence, 30)


@pytest.fixture(scope="session")
def small_chebyshev_table(chebyshev_recurrence: Recurrence) -> Hypergroup:
    return polynomial_hypergroup(chebyshev_recurrence, 12)


@pytest.fixture(scope="session")
def cartier_table(cartier_recurrence: Recurrence) -> Hypergroup:
    return polynomial_hypergroup(cartier_recurrence, 24)
