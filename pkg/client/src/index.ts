export {
  BatchError,
  RewardClient,
  ServiceError,
  TransportError,
  type ConnectOptions,
  type PerPhrase,
  type RewardItem,
  type RewardKind,
  type SpawnOptions,
} from "./client.js";
