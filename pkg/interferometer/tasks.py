from celery import shared_task

from .ensemble import tally_block
from .serializers import parse_run_config
from .timetravel import TwoPassProtocol


@shared_task
def run_trial_block(config_payload, start, stop):
    """
    Background task running Monte Carlo trials start..stop-1 of an ensemble
    """
    run_config = parse_run_config(config_payload)
    protocol = TwoPassProtocol(run_config.circuit, run_config.psi, run_config.injection)
    return tally_block(protocol, run_config.seed, start, stop)
