#pragma once
//---------------------------------------------------------------------------
#include <any>
#include <cstdint>
#include <memory>
#include <ostream>
#include <queue>
#include <string>
#include <string_view>
#include <typeinfo>
#include <vector>
#include "mrsim/errors.hpp"
//---------------------------------------------------------------------------
// Discrete-event kernel: clock, future event queue, entity registry
//---------------------------------------------------------------------------
namespace mrsim::sim {
//---------------------------------------------------------------------------
/// Simulation time in seconds
using SimTime = double;
using EntityId = int;
inline constexpr EntityId kKernel = -1;
//---------------------------------------------------------------------------
enum class EventTag : int {
   EntityCreation,
   Acknowledge,
   CharacteristicSetting,
   JobSubmit,
   TaskSubmit,
   TaskComplete,
   DataFetchComplete,
   ShuffleComplete,
   VmProcessingUpdate,
   // accepted but unused by any modeled workload
   Pause,
   Move,
   Migration,
   Termination,
};
inline constexpr int kEventTagCount = static_cast<int>(EventTag::Termination) + 1;
std::string_view toString(EventTag tag);
bool isKnownTag(EventTag tag);
//---------------------------------------------------------------------------
/// Immutable, shareable event data
using Payload = std::shared_ptr<const std::any>;

template <typename T>
Payload makePayload(T&& value) {
   return std::make_shared<const std::any>(std::forward<T>(value));
}
//---------------------------------------------------------------------------
struct SimEvent {
   SimTime time = 0;
   std::uint64_t sequence = 0;
   EntityId source = kKernel;
   EntityId destination = kKernel;
   EventTag tag = EventTag::Acknowledge;
   Payload payload;

   bool hasPayload() const { return payload && payload->has_value(); }
   template <typename T>
   bool holds() const { return hasPayload() && payload->type() == typeid(T); }
   /// Typed payload access; a mismatch is a protocol error
   template <typename T>
   const T& as() const {
      if (!holds<T>())
         throw ProtocolError("event " + std::to_string(sequence) + " (" + std::string(toString(tag)) + ") carries an unexpected payload type");
      return *std::any_cast<T>(payload.get());
   }
};
//---------------------------------------------------------------------------
struct EventHandle {
   std::uint64_t sequence;
   SimTime time;
};
//---------------------------------------------------------------------------
enum class EntityState { Created, Running, Finished };

class Engine;
//---------------------------------------------------------------------------
/// An addressable actor. Subclasses react to delivered events.
class SimEntity {
   public:
   explicit SimEntity(std::string name) : name_(std::move(name)) {}
   virtual ~SimEntity() = default;
   SimEntity(const SimEntity&) = delete;
   SimEntity& operator=(const SimEntity&) = delete;

   EntityId id() const { return id_; }
   const std::string& name() const { return name_; }
   EntityState state() const { return state_; }

   protected:
   /// Called on the entity-creation tag
   virtual void startEntity() {}
   /// Called for every tag other than creation, termination, and pause
   virtual void processEvent(const SimEvent& ev) = 0;
   /// Called on the termination tag
   virtual void shutdownEntity() {}

   EventHandle send(EntityId destination, SimTime delay, EventTag tag, Payload payload = {});
   EventHandle sendNow(EntityId destination, EventTag tag, Payload payload = {}) { return send(destination, 0.0, tag, std::move(payload)); }
   SimTime clock() const;
   Engine& engine() const;

   private:
   friend class Engine;
   Engine* engine_ = nullptr;
   EntityId id_ = kKernel;
   std::string name_;
   EntityState state_ = EntityState::Created;
};
//---------------------------------------------------------------------------
/// Single-threaded event loop. Events with equal time are delivered in enqueue order.
class Engine {
   public:
   Engine() = default;
   Engine(const Engine&) = delete;
   Engine& operator=(const Engine&) = delete;

   /// Register an entity; it receives its creation event at the current clock
   template <typename T, typename... Args>
   T& create(Args&&... args) {
      auto entity = std::make_unique<T>(std::forward<Args>(args)...);
      T& ref = *entity;
      registerEntity(std::move(entity));
      return ref;
   }

   EventHandle schedule(EntityId source, EntityId destination, SimTime delay, EventTag tag, Payload payload = {});
   /// Process events until the queue drains, then shut down all entities. Returns the final clock.
   SimTime run();
   SimTime clock() const { return clock_; }
   bool terminated() const { return terminated_; }

   size_t entityCount() const { return entities_.size(); }
   SimEntity& entity(EntityId id) const;
   std::uint64_t dispatchedCount() const { return dispatched_; }

   /// Emit `time,sequence,source,destination,tag` per dispatched event
   void setTrace(std::ostream* out) { trace_ = out; }

   private:
   void registerEntity(std::unique_ptr<SimEntity> entity);
   EventHandle enqueue(SimEvent ev);
   void dispatch(const SimEvent& ev);

   struct Later {
      bool operator()(const SimEvent& a, const SimEvent& b) const {
         if (a.time != b.time) return a.time > b.time;
         return a.sequence > b.sequence;
      }
   };

   std::vector<std::unique_ptr<SimEntity>> entities_;
   std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
   SimTime clock_ = 0.0;
   std::uint64_t nextSequence_ = 0;
   std::uint64_t dispatched_ = 0;
   bool running_ = false;
   bool terminated_ = false;
   std::ostream* trace_ = nullptr;
};
//---------------------------------------------------------------------------
}
//---------------------------------------------------------------------------
