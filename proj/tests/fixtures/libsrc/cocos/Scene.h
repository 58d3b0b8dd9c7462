#pragma once

#include "Node.h"

namespace cocos2d {

class Scene : public Node {
public:
    /// Creates an empty scene.
    static Scene* create();

    /// Initializes the scene before it is shown.
    virtual bool init();
};

}  // namespace cocos2d
