from concurrent.futures import Future, ThreadPoolExecutor
from typing import Any, Callable, ClassVar, Iterable
import asyncio
import functools
import threading


class ThreadedWorker:
    loop: ClassVar[asyncio.AbstractEventLoop | None] = None
    thread: ClassVar[threading.Thread | None] = None
    pool: ClassVar[ThreadPoolExecutor | None] = None

    @classmethod
    def start(cls, workers: int = 4):
        if cls.thread:
            raise RuntimeError("worker already started")

        cls.loop = asyncio.new_event_loop()
        cls.pool = ThreadPoolExecutor(max_workers=workers)

        def run():
            asyncio.set_event_loop(cls.loop)
            cls.loop.run_forever()

        cls.thread = threading.Thread(target=run, daemon=True)
        cls.thread.start()

    @classmethod
    def running(cls):
        return cls.thread is not None

    @classmethod
    def submit_task(cls, task: Callable, *args, **kwargs) -> Future:
        assert cls.loop is not None

        async def execute():
            result = await cls.loop.run_in_executor(
                cls.pool, functools.partial(task, *args, **kwargs)
            )
            if asyncio.iscoroutine(result):
                result = await result
            return result

        return asyncio.run_coroutine_threadsafe(execute(), cls.loop)

    @classmethod
    def map_ordered(cls, task: Callable, items: Iterable[Any]) -> list[Any]:
        """Run `task` over `items` on the pool; results keep submission order."""
        futures = [cls.submit_task(task, item) for item in items]
        return [f.result() for f in futures]

    @classmethod
    def stop(cls):
        if cls.loop:
            cls.loop.call_soon_threadsafe(cls.loop.stop)
            cls.thread.join()
            cls.pool.shutdown()
        cls.loop, cls.thread, cls.pool = None, None, None
