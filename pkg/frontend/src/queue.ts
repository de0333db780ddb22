// At most one in-flight mutation per session: submissions queue behind
// the previous one and settle in order, so a rapid double-submit can
// never interleave a stale render between two fresh ones.

export class MutationQueue {
  private tail: Promise<unknown> = Promise.resolve();

  enqueue<T>(task: () => Promise<T>): Promise<T> {
    const run = this.tail.then(task, task);
    // Keep the chain alive whether the task settles or rejects.
    this.tail = run.catch(() => undefined);
    return run;
  }
}
