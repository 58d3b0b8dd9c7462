#pragma once

#include "cocos2d.h"

class HelloWorld : public cocos2d::Scene {
public:
    static cocos2d::Scene* createScene();
    static HelloWorld* create();
    virtual bool init();
    void buildBackground();
    virtual void update(float delta);

private:
    float elapsed_ = 0.0f;
};

int clampFrames(int frames);
