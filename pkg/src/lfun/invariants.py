from typing import Any, Dict, Union

from loguru import logger

from src.series.power_series import PowerSeries
from src.series.weierstrass import weierstrass_data

from .kubota_leopoldt import LpSeries


def invariants(xi: Union[LpSeries, PowerSeries]) -> Dict[str, Any]:
    """
    (mu, lambda) of xi through Weierstrass preparation. mu = 0 is certified when the
    series has a unit coefficient at its stated precision.
    """
    series = xi.series if isinstance(xi, LpSeries) else xi
    data = weierstrass_data(series)
    certified = data.mu == 0 and data.lam < series.trunc
    logger.bind(event="lfun_invariants").info(f"mu={data.mu} lambda={data.lam} certified={certified}")
    return {"mu": data.mu, "lambda": data.lam, "precision": data.precision, "certified": certified}
