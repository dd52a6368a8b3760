#include "mrsim/kernel.hpp"
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fmt/format.h>
#include <spdlog/spdlog.h>
//---------------------------------------------------------------------------
namespace mrsim::sim {
//---------------------------------------------------------------------------
std::string_view toString(EventTag tag) {
   switch (tag) {
      case EventTag::EntityCreation: return "entity-creation";
      case EventTag::Acknowledge: return "acknowledge";
      case EventTag::CharacteristicSetting: return "characteristic-setting";
      case EventTag::JobSubmit: return "job-submit";
      case EventTag::TaskSubmit: return "task-submit";
      case EventTag::TaskComplete: return "task-complete";
      case EventTag::DataFetchComplete: return "data-fetch-complete";
      case EventTag::ShuffleComplete: return "shuffle-complete";
      case EventTag::VmProcessingUpdate: return "vm-processing-update";
      case EventTag::Pause: return "pause";
      case EventTag::Move: return "move";
      case EventTag::Migration: return "migration";
      case EventTag::Termination: return "termination";
   }
   return "unknown";
}
//---------------------------------------------------------------------------
bool isKnownTag(EventTag tag) {
   auto raw = static_cast<int>(tag);
   return raw >= 0 && raw < kEventTagCount;
}
//---------------------------------------------------------------------------
EventHandle SimEntity::send(EntityId destination, SimTime delay, EventTag tag, Payload payload) {
   return engine().schedule(id_, destination, delay, tag, std::move(payload));
}
//---------------------------------------------------------------------------
SimTime SimEntity::clock() const {
   return engine().clock();
}
//---------------------------------------------------------------------------
Engine& SimEntity::engine() const {
   if (!engine_) throw RegistrationError("entity '" + name_ + "' is not registered with an engine");
   return *engine_;
}
//---------------------------------------------------------------------------
void Engine::registerEntity(std::unique_ptr<SimEntity> entity) {
   if (terminated_) throw ProtocolError("cannot register entity '" + entity->name() + "' after termination");
   entity->engine_ = this;
   entity->id_ = static_cast<EntityId>(entities_.size());
   EntityId id = entity->id_;
   entities_.push_back(std::move(entity));
   enqueue(SimEvent{clock_, 0, kKernel, id, EventTag::EntityCreation, {}});
}
//---------------------------------------------------------------------------
SimEntity& Engine::entity(EntityId id) const {
   if (id < 0 || static_cast<size_t>(id) >= entities_.size())
      throw RegistrationError("unknown entity id " + std::to_string(id));
   return *entities_[id];
}
//---------------------------------------------------------------------------
EventHandle Engine::schedule(EntityId source, EntityId destination, SimTime delay, EventTag tag, Payload payload) {
   if (terminated_) throw ProtocolError("engine already terminated");
   if (!std::isfinite(delay) || delay < 0)
      throw ValidationError(fmt::format("event delay must be finite and non-negative, got {}", delay));
   if (destination < 0 || static_cast<size_t>(destination) >= entities_.size())
      throw RegistrationError("unknown destination entity " + std::to_string(destination));
   if (!isKnownTag(tag)) throw ValidationError("unknown event tag " + std::to_string(static_cast<int>(tag)));
   SimTime when = clock_ + delay;
   if (!std::isfinite(when)) throw ValidationError("event time overflows");
   return enqueue(SimEvent{when, 0, source, destination, tag, std::move(payload)});
}
//---------------------------------------------------------------------------
EventHandle Engine::enqueue(SimEvent ev) {
   ev.sequence = nextSequence_++;
   EventHandle handle{ev.sequence, ev.time};
   queue_.push(std::move(ev));
   return handle;
}
//---------------------------------------------------------------------------
SimTime Engine::run() {
   if (entities_.empty()) throw ValidationError("run() needs at least one registered entity");
   if (terminated_ || running_) throw ProtocolError("engine can only run once");
   running_ = true;
   std::vector<bool> terminationSent(entities_.size(), false);
   while (true) {
      while (!queue_.empty()) {
         SimEvent ev = queue_.top();
         queue_.pop();
         if (ev.time < clock_) {
            std::fprintf(stderr, "mrsim: event %llu at %.17g precedes clock %.17g\n", static_cast<unsigned long long>(ev.sequence), ev.time, clock_);
            std::abort();
         }
         clock_ = ev.time;
         if (ev.tag == EventTag::Termination && static_cast<size_t>(ev.destination) < terminationSent.size())
            terminationSent[ev.destination] = true;
         dispatch(ev);
      }
      // Drained: shut down every entity that has not been terminated yet
      terminationSent.resize(entities_.size(), false);
      bool any = false;
      for (size_t i = 0; i < entities_.size(); ++i) {
         if (!terminationSent[i] && entities_[i]->state() != EntityState::Finished) {
            terminationSent[i] = true;
            enqueue(SimEvent{clock_, 0, kKernel, static_cast<EntityId>(i), EventTag::Termination, {}});
            any = true;
         }
      }
      if (!any) break;
   }
   running_ = false;
   terminated_ = true;
   return clock_;
}
//---------------------------------------------------------------------------
void Engine::dispatch(const SimEvent& ev) {
   if (!isKnownTag(ev.tag)) throw ProtocolError("unknown event tag " + std::to_string(static_cast<int>(ev.tag)) + " at dispatch");
   SimEntity& target = entity(ev.destination);
   if (target.state_ == EntityState::Finished)
      throw ProtocolError(fmt::format("event {} ({}) sent to finished entity '{}'", ev.sequence, toString(ev.tag), target.name()));
   if (ev.tag == EventTag::EntityCreation) {
      if (target.state_ != EntityState::Created) throw ProtocolError("duplicate creation of '" + target.name() + "'");
   } else if (target.state_ == EntityState::Created) {
      throw ProtocolError(fmt::format("'{}' received {} before creation", target.name(), toString(ev.tag)));
   }

   ++dispatched_;
   if (trace_)
      *trace_ << fmt::format("{},{},{},{},{}\n", ev.time, ev.sequence, ev.source, ev.destination, toString(ev.tag));

   switch (ev.tag) {
      case EventTag::EntityCreation:
         target.state_ = EntityState::Running;
         target.startEntity();
         break;
      case EventTag::Termination:
         target.state_ = EntityState::Finished;
         target.shutdownEntity();
         break;
      case EventTag::Pause:
      case EventTag::Move:
      case EventTag::Migration:
         spdlog::debug("'{}' ignores {} at t={}", target.name(), toString(ev.tag), ev.time);
         break;
      default:
         target.processEvent(ev);
   }
}
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
