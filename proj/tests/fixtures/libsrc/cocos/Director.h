#pragma once

#include "Scene.h"

namespace cocos2d {

struct Size {
    float width = 0.0f;
    float height = 0.0f;
};

class Director {
public:
    /// Returns the shared application director singleton.
    static Director* getInstance();

    /// Returns the visible size of the running window in points.
    Size getVisibleSize() const;

    /// Replaces the running scene with a new one.
    void replaceScene(Scene* scene);

    /// Ends the execution and releases the running scene.
    void end();
};

}  // namespace cocos2d
