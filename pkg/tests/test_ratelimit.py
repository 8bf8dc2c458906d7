import pytest

from chaintrace.ratelimit import (
    RateLimitGovernor,
    RateLimitPolicy,
    VirtualClock,
)

POLICY = RateLimitPolicy(max_requests=2, window=60.0, backoff=960.0)


def make_governor(clock=None, **policies):
    policies = policies or {"twitter": POLICY}
    return RateLimitGovernor(policies, clock or VirtualClock())


def test_single_request_immediate():
    governor = make_governor(twitter=RateLimitPolicy(1, 60.0, 960.0))
    assert governor.acquire("twitter").granted_at == 0.0


def test_backoff_schedule_matches_paper_quota():
    clock = VirtualClock()
    governor = make_governor(clock)
    first = governor.acquire("twitter")
    clock.advance(1.0)
    second = governor.acquire("twitter")
    third = governor.acquire("twitter")
    assert (first.granted_at, second.granted_at, third.granted_at) == (0.0, 1.0, 961.0)


def test_window_frees_up_without_backoff_when_old_grants_expire():
    clock = VirtualClock()
    governor = make_governor(clock)
    governor.acquire("twitter")
    clock.advance(61.0)
    permit = governor.acquire("twitter")
    assert permit.granted_at == 61.0


def test_sources_do_not_interact():
    clock = VirtualClock()
    governor = make_governor(
        clock,
        twitter=RateLimitPolicy(1, 60.0, 960.0),
        reddit=RateLimitPolicy(1, 60.0, 960.0),
    )
    assert governor.acquire("twitter").granted_at == 0.0
    assert governor.acquire("reddit").granted_at == 0.0  # not delayed by twitter


def test_unknown_source_rejected():
    governor = make_governor()
    with pytest.raises(KeyError):
        governor.acquire("pigeon-post")


def test_policy_validation():
    with pytest.raises(ValueError):
        RateLimitPolicy(0, 60.0)
    with pytest.raises(ValueError):
        RateLimitPolicy(1, 0.0)
    with pytest.raises(ValueError):
        RateLimitPolicy(1, 60.0, 0.0)


def test_virtual_clock():
    clock = VirtualClock(start=5.0)
    clock.sleep(2.5)
    assert clock.now() == 7.5
    with pytest.raises(ValueError):
        clock.advance(-1.0)


def test_window_never_exceeded_over_many_requests():
    clock = VirtualClock()
    governor = make_governor(clock)
    grants = [governor.acquire("twitter").granted_at for _ in range(500)]
    assert grants == sorted(grants)
    for i in range(2, len(grants)):
        # at most 2 grants in any half-open 60s window
        assert grants[i] - grants[i - 2] >= 60.0
