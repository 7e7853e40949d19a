import time

from fastapi import Request, Response
from loguru import logger
from starlette.middleware.base import BaseHTTPMiddleware, RequestResponseEndpoint
from starlette.types import ASGIApp


class ProcessingTimeMiddleware(BaseHTTPMiddleware):
    """Report how long each request took and flag slow planning calls.

    Planning requests run a full swarm per waypoint, so their latency depends
    on the submitted swarm size. Requests slower than ``slow_request_ms`` are
    logged at WARNING with the route and the elapsed time.
    """

    def __init__(self, app: ASGIApp, slow_request_ms: float = 0.0) -> None:
        super().__init__(app)
        self.slow_request_ms = slow_request_ms

    async def dispatch(
        self,
        request: Request,
        call_next: RequestResponseEndpoint,
    ) -> Response:
        """Time the request and set the X-Process-Time header in seconds.

        Args:
            request (Request): The incoming request.
            call_next (RequestResponseEndpoint): The next request handler in
            the middleware chain.

        Returns:
            Response: The response with added X-Process-Time header.
        """
        start_time = time.perf_counter()
        response = await call_next(request)
        elapsed = time.perf_counter() - start_time
        response.headers["X-Process-Time"] = f"{elapsed:.6f}"

        elapsed_ms = elapsed * 1000.0
        # 0 disables the warning.
        if 0 < self.slow_request_ms < elapsed_ms:
            logger.warning(
                "Slow request {} {} took {:.1f} ms (status {})",
                request.method,
                request.url.path,
                elapsed_ms,
                response.status_code,
            )
        return response
