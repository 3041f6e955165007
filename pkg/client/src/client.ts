/**
 * Client for the kgeval reward service.
 *
 * Speaks the service's line-delimited JSON protocol over either a spawned
 * child process's stdio or a TCP connection. Requests on one session are
 * answered strictly in issue order, so responses are matched to callers
 * through a FIFO of pending promises, with the echoed id as a sanity check.
 */

import { spawn } from "node:child_process";
import net from "node:net";
import readline from "node:readline";
import type { Readable, Writable } from "node:stream";

export type RewardKind = "fg" | "fb" | "f1m" | "f15";

export type PerPhrase = Array<[string, string | null, number]>;

export interface RewardItem {
  predictions: string[];
  targets: string[];
}

interface WireResponse {
  id?: string | null;
  reward?: number;
  per_phrase?: PerPhrase;
  error?: string;
}

/** The service answered this request with an error response. */
export class ServiceError extends Error {
  constructor(message: string, readonly requestId: string | null) {
    super(message);
    this.name = "ServiceError";
  }
}

/** The transport dropped before every pending request was answered. */
export class TransportError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "TransportError";
  }
}

/** One or more items of a batch failed; the rest completed. */
export class BatchError extends Error {
  constructor(readonly failures: Array<{ index: number; error: Error }>) {
    super(
      `batch failed for item(s) ${failures.map((f) => f.index).join(", ")}: ` +
        failures.map((f) => f.error.message).join("; "),
    );
    this.name = "BatchError";
  }
}

interface Pending {
  id: string;
  resolve: (response: WireResponse) => void;
  reject: (err: Error) => void;
}

export interface SpawnOptions {
  /** Service executable, e.g. "kgeval" or "python3". */
  command: string;
  /** Arguments; defaults to serving over stdio when the command is kgeval. */
  args?: string[];
  defaultKind?: RewardKind;
}

export interface ConnectOptions {
  host: string;
  port: number;
  defaultKind?: RewardKind;
}

export class RewardClient {
  private pending: Pending[] = [];
  private nextId = 0;
  private closed = false;

  private constructor(
    private readonly sink: Writable,
    source: Readable,
    private readonly defaultKind: RewardKind,
    private readonly shutdown: () => Promise<void>,
  ) {
    const rl = readline.createInterface({ input: source });
    rl.on("line", (line) => this.onLine(line));
    source.on("close", () => this.failPending("service stream closed"));
    source.on("error", (err) => this.failPending(String(err)));
  }

  /** Spawn the service as a child process and talk over its stdio. */
  static spawnService(options: SpawnOptions): RewardClient {
    const child = spawn(options.command, options.args ?? ["reward-serve"], {
      stdio: ["pipe", "pipe", "inherit"],
    });
    const shutdown = () =>
      new Promise<void>((resolve) => {
        child.once("exit", () => resolve());
        child.stdin.end();
        setTimeout(() => {
          child.kill();
          resolve();
        }, 5000).unref();
      });
    return new RewardClient(
      child.stdin,
      child.stdout,
      options.defaultKind ?? "fg",
      shutdown,
    );
  }

  /** Connect to a service listening on TCP. */
  static async connect(options: ConnectOptions): Promise<RewardClient> {
    const socket = await new Promise<net.Socket>((resolve, reject) => {
      const s = net.createConnection(
        { host: options.host, port: options.port },
        () => resolve(s),
      );
      s.once("error", reject);
    });
    const shutdown = () =>
      new Promise<void>((resolve) => {
        socket.once("close", () => resolve());
        socket.end();
      });
    return new RewardClient(
      socket,
      socket,
      options.defaultKind ?? "fg",
      shutdown,
    );
  }

  private onLine(line: string): void {
    const trimmed = line.trim();
    if (!trimmed) return;
    const pending = this.pending.shift();
    if (!pending) return; // unsolicited line; nothing is waiting on it
    let parsed: WireResponse;
    try {
      parsed = JSON.parse(trimmed) as WireResponse;
    } catch {
      pending.reject(new TransportError(`unparseable response line: ${trimmed}`));
      return;
    }
    if (parsed.id != null && parsed.id !== pending.id) {
      pending.reject(
        new TransportError(`response id ${parsed.id} does not match request ${pending.id}`),
      );
      return;
    }
    pending.resolve(parsed);
  }

  private failPending(reason: string): void {
    const waiting = this.pending;
    this.pending = [];
    for (const p of waiting) p.reject(new TransportError(reason));
  }

  private request(
    predictions: string[],
    targets: string[],
    kind: RewardKind,
  ): Promise<WireResponse> {
    if (this.closed) {
      return Promise.reject(new TransportError("session is closed"));
    }
    const id = `c${this.nextId++}`;
    const line = JSON.stringify({
      id,
      targets,
      predictions,
      reward_kind: kind,
    });
    return new Promise<WireResponse>((resolve, reject) => {
      this.pending.push({ id, resolve, reject });
      this.sink.write(line + "\n", (err) => {
        if (err) {
          this.pending = this.pending.filter((p) => p.id !== id);
          reject(new TransportError(String(err)));
        }
      });
    });
  }

  /** One round trip; throws ServiceError on an error response. */
  async getReward(
    predictions: string[],
    targets: string[],
    kind?: RewardKind,
  ): Promise<number> {
    const response = await this.request(predictions, targets, kind ?? this.defaultKind);
    if (response.error !== undefined) {
      throw new ServiceError(response.error, response.id ?? null);
    }
    if (typeof response.reward !== "number") {
      throw new TransportError(`response carries no reward: ${JSON.stringify(response)}`);
    }
    return response.reward;
  }

  /**
   * Pipelined batch; rewards come back aligned with the items. Item
   * failures are collected and raised together after the whole batch has
   * been answered, so one bad item never hides the others' results.
   */
  async getRewardsBatch(items: RewardItem[], kind?: RewardKind): Promise<number[]> {
    const settled = await Promise.allSettled(
      items.map((item) => this.getReward(item.predictions, item.targets, kind)),
    );
    const rewards: number[] = [];
    const failures: Array<{ index: number; error: Error }> = [];
    settled.forEach((result, index) => {
      if (result.status === "fulfilled") {
        rewards.push(result.value);
      } else {
        failures.push({ index, error: result.reason as Error });
      }
    });
    if (failures.length > 0) {
      throw new BatchError(failures);
    }
    return rewards;
  }

  async close(): Promise<void> {
    if (this.closed) return;
    this.closed = true;
    this.failPending("session closed");
    await this.shutdown();
  }
}
