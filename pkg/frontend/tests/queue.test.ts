import { describe, expect, it } from "vitest";

import { MutationQueue } from "../src/queue.js";

function deferred<T>() {
  let resolve!: (value: T) => void;
  let reject!: (reason?: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

describe("MutationQueue", () => {
  it("starts the second task only after the first settles", async () => {
    const queue = new MutationQueue();
    const gate = deferred<void>();
    const order: string[] = [];

    const first = queue.enqueue(async () => {
      order.push("start:1");
      await gate.promise;
      order.push("end:1");
      return 1;
    });
    const second = queue.enqueue(async () => {
      order.push("start:2");
      return 2;
    });

    await new Promise((r) => setTimeout(r, 10));
    expect(order).toEqual(["start:1"]);

    gate.resolve();
    expect(await first).toBe(1);
    expect(await second).toBe(2);
    expect(order).toEqual(["start:1", "end:1", "start:2"]);
  });

  it("a rejected task does not block the chain", async () => {
    const queue = new MutationQueue();
    const first = queue.enqueue(async () => {
      throw new Error("nope");
    });
    const second = queue.enqueue(async () => "after");
    await expect(first).rejects.toThrow("nope");
    expect(await second).toBe("after");
  });

  it("each caller receives its own task's result", async () => {
    const queue = new MutationQueue();
    const results = await Promise.all(
      [1, 2, 3].map((n) => queue.enqueue(async () => n * 10)),
    );
    expect(results).toEqual([10, 20, 30]);
  });

  it("preserves FIFO order across many tasks", async () => {
    const queue = new MutationQueue();
    const order: number[] = [];
    await Promise.all(
      Array.from({ length: 25 }, (_, i) =>
        queue.enqueue(async () => {
          await new Promise((r) => setTimeout(r, (25 - i) % 3));
          order.push(i);
        }),
      ),
    );
    expect(order).toEqual(Array.from({ length: 25 }, (_, i) => i));
  });
});
